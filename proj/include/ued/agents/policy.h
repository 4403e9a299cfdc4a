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

#pragma once

#include <cstdint>
#include <memory>
#include <span>

#include "ued/agents/params.h"
#include "ued/common/rng.h"

namespace ued::agents {

/// Shape of the recurrent actor-critic.
///
///   tile codes -> embedding (n_codes x tile_embed_dim), one per grid cell
///   aux one-hot/scalars -> linear embedding (aux_dim x aux_embed_dim)
///   concat -> dense encoder_dim, ReLU -> GRU hidden -> {policy logits, value}
struct NetSpec {
  int grid_cells = 25;
  int n_codes = 4;
  int tile_embed_dim = 8;
  int aux_dim = 4;
  int aux_embed_dim = 4;
  int encoder_dim = 128;
  int hidden = 256;
  int n_actions = 3;

  int input_dim() const { return grid_cells * tile_embed_dim + aux_embed_dim; }
  bool operator==(const NetSpec&) const = default;
};

void ValidateNetSpec(const NetSpec& spec);

// Parameter indices in the layout, in storage order.
enum ParamIndex : int {
  kTileEmbed = 0,
  kAuxEmbed,
  kEncoderW,
  kEncoderB,
  kGruInputW,   // encoder_dim x 3H, gate blocks [reset | update | candidate]
  kGruInputB,
  kGruHiddenW,  // H x 3H
  kGruHiddenB,
  kPolicyW,
  kPolicyB,
  kValueW,
  kValueB,
  kNumParams,
};

std::shared_ptr<const ParamLayout> MakeLayout(const NetSpec& spec);

/// A batch of network inputs, row-major, one row per lane.
struct InputView {
  int rows = 0;
  std::span<const std::uint8_t> tiles;  // rows * grid_cells
  std::span<const float> aux;           // rows * aux_dim
};

/// A [T, L] block of inputs in time-major order (row t * L + l).
/// resets[t * L + l] = 1 zeroes the lane's hidden state before step t.
struct SequenceView {
  int steps = 0;
  int lanes = 0;
  std::span<const std::uint8_t> tiles;
  std::span<const float> aux;
  std::span<const std::uint8_t> resets;
};

template <class S>
class RecurrentPolicy {
 public:
  using Mat = RowMat<S>;
  using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

  explicit RecurrentPolicy(NetSpec spec);

  const NetSpec& spec() const { return spec_; }
  const std::shared_ptr<const ParamLayout>& layout() const { return layout_; }

  ParamSet<S> zeros() const { return ParamSet<S>(layout_); }

  /// Orthogonal dense/recurrent weights (gain sqrt 2), heads gain 0.01,
  /// N(0, 1) embeddings, zero biases.
  ParamSet<S> init(Rng rng) const;

  Mat zero_hidden(int lanes) const { return Mat::Zero(lanes, spec_.hidden); }

  struct StepOutput {
    Mat logits;
    Vec values;
    Mat hidden;
  };

  /// One recurrent step for a batch of lanes. `hidden` must already be
  /// zeroed for lanes that start a new episode.
  StepOutput step(const ParamSet<S>& params, const InputView& in,
                  const Mat& hidden) const;

  /// Activations kept for backpropagation through time.
  struct SequenceCache {
    Mat inputs;      // N x input_dim (embedded)
    Mat encoded;     // N x encoder_dim, post-ReLU
    Mat hidden_in;   // N x H, after reset masking
    Mat reset_gate;  // N x H
    Mat update_gate;
    Mat candidate;
    Mat hidden_n;    // N x H, recurrent candidate pre-activation term W_hn h + b_hn
    Mat hidden_out;  // N x H
    Mat logits;      // N x A
    Vec values;      // N
  };

  void forward_sequence(const ParamSet<S>& params, const SequenceView& seq,
                        const Mat& initial_hidden, SequenceCache& cache) const;

  /// Accumulates dLoss/dparams into `grads` (not cleared here).
  void backward_sequence(const ParamSet<S>& params, const SequenceView& seq,
                         const SequenceCache& cache, const Mat& dlogits,
                         const Vec& dvalues, ParamSet<S>& grads) const;

 private:
  void Embed(const ParamSet<S>& params, int rows,
             std::span<const std::uint8_t> tiles, std::span<const float> aux,
             Mat& out) const;

  NetSpec spec_;
  std::shared_ptr<const ParamLayout> layout_;
};

extern template class RecurrentPolicy<float>;
extern template class RecurrentPolicy<double>;

}  // namespace ued::agents
