// Copyright 2026 The UED Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ued/agents/policy.h"

#include <Eigen/QR>
#include <cmath>
#include <numbers>

#include "ued/common/errors.h"

namespace ued::agents {

namespace {

double Normal(Rng& rng) {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// rows x cols matrix with orthonormal rows or columns (whichever is fewer).
Eigen::MatrixXd Orthogonal(Rng& rng, int rows, int cols) {
  const int big = std::max(rows, cols);
  const int small = std::min(rows, cols);
  Eigen::MatrixXd a(big, small);
  for (int j = 0; j < small; ++j) {
    for (int i = 0; i < big; ++i) a(i, j) = Normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(small);
  for (int j = 0; j < small; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  if (rows >= cols) return q;
  return q.transpose();
}

template <class S>
S Sigmoid(S x) {
  return S(1) / (S(1) + std::exp(-x));
}

}  // namespace

void ValidateNetSpec(const NetSpec& s) {
  if (s.grid_cells < 1 || s.n_codes < 1 || s.tile_embed_dim < 1 ||
      s.aux_dim < 0 || s.aux_embed_dim < 0 || s.encoder_dim < 1 ||
      s.hidden < 1 || s.n_actions < 1) {
    throw ConfigError("network dimensions must be positive");
  }
}

std::shared_ptr<const ParamLayout> MakeLayout(const NetSpec& s) {
  ValidateNetSpec(s);
  auto layout = std::make_shared<ParamLayout>();
  const int h3 = 3 * s.hidden;
  layout->add("tile_embed", s.n_codes, s.tile_embed_dim);
  layout->add("aux_embed", s.aux_dim, s.aux_embed_dim);
  layout->add("encoder/w", s.input_dim(), s.encoder_dim);
  layout->add("encoder/b", 1, s.encoder_dim);
  layout->add("gru/w_input", s.encoder_dim, h3);
  layout->add("gru/b_input", 1, h3);
  layout->add("gru/w_hidden", s.hidden, h3);
  layout->add("gru/b_hidden", 1, h3);
  layout->add("policy/w", s.hidden, s.n_actions);
  layout->add("policy/b", 1, s.n_actions);
  layout->add("value/w", s.hidden, 1);
  layout->add("value/b", 1, 1);
  return layout;
}

template <class S>
RecurrentPolicy<S>::RecurrentPolicy(NetSpec spec)
    : spec_(spec), layout_(MakeLayout(spec)) {}

template <class S>
ParamSet<S> RecurrentPolicy<S>::init(Rng rng) const {
  ParamSet<S> p(layout_);
  const S sqrt2 = static_cast<S>(std::numbers::sqrt2);
  Rng embed_rng = rng.fold_in(1);
  for (int idx : {kTileEmbed, kAuxEmbed}) {
    auto m = p[idx];
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = static_cast<S>(Normal(embed_rng));
    }
  }
  auto orth = [&](int idx, Rng r, S gain, int blocks) {
    auto m = p[idx];
    const int cols = static_cast<int>(m.cols()) / blocks;
    for (int b = 0; b < blocks; ++b) {
      Rng br = r.split(b);
      m.middleCols(b * cols, cols) =
          (Orthogonal(br, static_cast<int>(m.rows()), cols) *
           static_cast<double>(gain))
              .template cast<S>();
    }
  };
  orth(kEncoderW, rng.fold_in(2), sqrt2, 1);
  orth(kGruInputW, rng.fold_in(3), sqrt2, 3);
  orth(kGruHiddenW, rng.fold_in(4), sqrt2, 3);
  orth(kPolicyW, rng.fold_in(5), S(0.01), 1);
  orth(kValueW, rng.fold_in(6), S(0.01), 1);
  return p;
}

template <class S>
void RecurrentPolicy<S>::Embed(const ParamSet<S>& params, int rows,
                               std::span<const std::uint8_t> tiles,
                               std::span<const float> aux, Mat& out) const {
  const int cells = spec_.grid_cells;
  const int e = spec_.tile_embed_dim;
  if (static_cast<int>(tiles.size()) != rows * cells ||
      static_cast<int>(aux.size()) != rows * spec_.aux_dim) {
    throw ShapeError("policy input does not match the network spec");
  }
  out.resize(rows, spec_.input_dim());
  const auto table = params[kTileEmbed];
  for (int n = 0; n < rows; ++n) {
    const std::uint8_t* t = tiles.data() + static_cast<std::size_t>(n) * cells;
    for (int c = 0; c < cells; ++c) {
      if (t[c] >= spec_.n_codes) throw ShapeError("tile code out of range");
      out.block(n, c * e, 1, e) = table.row(t[c]);
    }
  }
  if (spec_.aux_embed_dim > 0) {
    Eigen::Map<const RowMat<float>> a(aux.data(), rows, spec_.aux_dim);
    out.rightCols(spec_.aux_embed_dim).noalias() =
        a.template cast<S>() * params[kAuxEmbed];
  }
}

template <class S>
typename RecurrentPolicy<S>::StepOutput RecurrentPolicy<S>::step(
    const ParamSet<S>& params, const InputView& in, const Mat& hidden) const {
  const int h = spec_.hidden;
  if (hidden.rows() != in.rows || hidden.cols() != h) {
    throw ShapeError("hidden state has the wrong shape");
  }
  Mat x;
  Embed(params, in.rows, in.tiles, in.aux, x);
  Mat z = (x * params[kEncoderW]).rowwise() + params[kEncoderB].row(0);
  z = z.cwiseMax(S(0));
  Mat gi = (z * params[kGruInputW]).rowwise() + params[kGruInputB].row(0);
  Mat gh = (hidden * params[kGruHiddenW]).rowwise() + params[kGruHiddenB].row(0);

  StepOutput out;
  out.hidden.resize(in.rows, h);
  for (int n = 0; n < in.rows; ++n) {
    for (int j = 0; j < h; ++j) {
      const S r = Sigmoid(gi(n, j) + gh(n, j));
      const S u = Sigmoid(gi(n, h + j) + gh(n, h + j));
      const S c = std::tanh(gi(n, 2 * h + j) + r * gh(n, 2 * h + j));
      out.hidden(n, j) = (S(1) - u) * c + u * hidden(n, j);
    }
  }
  out.logits = (out.hidden * params[kPolicyW]).rowwise() + params[kPolicyB].row(0);
  out.values = (out.hidden * params[kValueW]).col(0).array() + params[kValueB](0, 0);
  return out;
}

template <class S>
void RecurrentPolicy<S>::forward_sequence(const ParamSet<S>& params,
                                          const SequenceView& seq,
                                          const Mat& initial_hidden,
                                          SequenceCache& cache) const {
  const int steps = seq.steps;
  const int lanes = seq.lanes;
  const int n = steps * lanes;
  const int h = spec_.hidden;
  if (static_cast<int>(seq.resets.size()) != n) {
    throw ShapeError("resets must have steps * lanes entries");
  }
  if (initial_hidden.rows() != lanes || initial_hidden.cols() != h) {
    throw ShapeError("initial hidden state has the wrong shape");
  }
  Embed(params, n, seq.tiles, seq.aux, cache.inputs);
  cache.encoded.noalias() = cache.inputs * params[kEncoderW];
  cache.encoded.rowwise() += params[kEncoderB].row(0);
  cache.encoded = cache.encoded.cwiseMax(S(0));
  Mat gi = cache.encoded * params[kGruInputW];
  gi.rowwise() += params[kGruInputB].row(0);

  cache.hidden_in.resize(n, h);
  cache.reset_gate.resize(n, h);
  cache.update_gate.resize(n, h);
  cache.candidate.resize(n, h);
  cache.hidden_n.resize(n, h);
  cache.hidden_out.resize(n, h);

  const auto wh = params[kGruHiddenW];
  const auto bh = params[kGruHiddenB];
  Mat prev = initial_hidden;
  Mat gh(lanes, 3 * h);
  for (int t = 0; t < steps; ++t) {
    const int base = t * lanes;
    for (int l = 0; l < lanes; ++l) {
      if (seq.resets[base + l]) prev.row(l).setZero();
    }
    cache.hidden_in.middleRows(base, lanes) = prev;
    gh.noalias() = prev * wh;
    gh.rowwise() += bh.row(0);
    for (int l = 0; l < lanes; ++l) {
      const int row = base + l;
      for (int j = 0; j < h; ++j) {
        const S r = Sigmoid(gi(row, j) + gh(l, j));
        const S u = Sigmoid(gi(row, h + j) + gh(l, h + j));
        const S hn = gh(l, 2 * h + j);
        const S c = std::tanh(gi(row, 2 * h + j) + r * hn);
        cache.reset_gate(row, j) = r;
        cache.update_gate(row, j) = u;
        cache.candidate(row, j) = c;
        cache.hidden_n(row, j) = hn;
        const S out = (S(1) - u) * c + u * prev(l, j);
        cache.hidden_out(row, j) = out;
        prev(l, j) = out;
      }
    }
  }
  cache.logits.noalias() = cache.hidden_out * params[kPolicyW];
  cache.logits.rowwise() += params[kPolicyB].row(0);
  cache.values = (cache.hidden_out * params[kValueW]).col(0).array() +
                 params[kValueB](0, 0);
}

template <class S>
void RecurrentPolicy<S>::backward_sequence(const ParamSet<S>& params,
                                           const SequenceView& seq,
                                           const SequenceCache& cache,
                                           const Mat& dlogits,
                                           const Vec& dvalues,
                                           ParamSet<S>& grads) const {
  const int steps = seq.steps;
  const int lanes = seq.lanes;
  const int n = steps * lanes;
  const int h = spec_.hidden;

  // Heads.
  grads[kPolicyW].noalias() += cache.hidden_out.transpose() * dlogits;
  grads[kPolicyB].row(0) += dlogits.colwise().sum();
  grads[kValueW].col(0).noalias() += cache.hidden_out.transpose() * dvalues;
  grads[kValueB](0, 0) += dvalues.sum();
  Mat dh_out = dlogits * params[kPolicyW].transpose();
  dh_out.noalias() += dvalues * params[kValueW].col(0).transpose();

  // Recurrence, newest step first.
  const auto wh = params[kGruHiddenW];
  Mat dgi(n, 3 * h);
  Mat dgh_all(n, 3 * h);
  Mat carry = Mat::Zero(lanes, h);
  Mat dh_in(lanes, h);
  for (int t = steps - 1; t >= 0; --t) {
    const int base = t * lanes;
    auto dgh = dgh_all.middleRows(base, lanes);
    for (int l = 0; l < lanes; ++l) {
      const int row = base + l;
      for (int j = 0; j < h; ++j) {
        const S dh = dh_out(row, j) + carry(l, j);
        const S r = cache.reset_gate(row, j);
        const S u = cache.update_gate(row, j);
        const S c = cache.candidate(row, j);
        const S hin = cache.hidden_in(row, j);
        const S dc = dh * (S(1) - u);
        const S du = dh * (hin - c);
        const S dac = dc * (S(1) - c * c);
        const S dr = dac * cache.hidden_n(row, j);
        const S dar = dr * r * (S(1) - r);
        const S dau = du * u * (S(1) - u);
        dgi(row, j) = dar;
        dgi(row, h + j) = dau;
        dgi(row, 2 * h + j) = dac;
        dgh(l, j) = dar;
        dgh(l, h + j) = dau;
        dgh(l, 2 * h + j) = dac * r;
        dh_in(l, j) = dh * u;
      }
    }
    dh_in.noalias() += dgh * wh.transpose();
    for (int l = 0; l < lanes; ++l) {
      if (seq.resets[base + l]) {
        carry.row(l).setZero();
      } else {
        carry.row(l) = dh_in.row(l);
      }
    }
  }

  // Weight gradients, all steps at once.
  grads[kGruHiddenW].noalias() += cache.hidden_in.transpose() * dgh_all;
  grads[kGruHiddenB].row(0) += dgh_all.colwise().sum();
  grads[kGruInputW].noalias() += cache.encoded.transpose() * dgi;
  grads[kGruInputB].row(0) += dgi.colwise().sum();
  Mat dz = dgi * params[kGruInputW].transpose();
  dz = (cache.encoded.array() > S(0)).select(dz, S(0));
  grads[kEncoderW].noalias() += cache.inputs.transpose() * dz;
  grads[kEncoderB].row(0) += dz.colwise().sum();
  const Mat dx = dz * params[kEncoderW].transpose();

  const int cells = spec_.grid_cells;
  const int e = spec_.tile_embed_dim;
  auto dtable = grads[kTileEmbed];
  for (int r = 0; r < n; ++r) {
    const std::uint8_t* t = seq.tiles.data() + static_cast<std::size_t>(r) * cells;
    for (int c = 0; c < cells; ++c) {
      dtable.row(t[c]) += dx.block(r, c * e, 1, e);
    }
  }
  if (spec_.aux_embed_dim > 0) {
    Eigen::Map<const RowMat<float>> a(seq.aux.data(), n, spec_.aux_dim);
    grads[kAuxEmbed].noalias() +=
        a.template cast<S>().transpose() * dx.rightCols(spec_.aux_embed_dim);
  }
}

template class RecurrentPolicy<float>;
template class RecurrentPolicy<double>;

}  // namespace ued::agents
