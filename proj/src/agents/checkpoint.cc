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

#include "ued/agents/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ued/common/errors.h"

namespace ued::agents {

namespace {

constexpr char kMagic[8] = {'U', 'E', 'D', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    const std::uint64_t lo = u32();
    const std::uint64_t hi = u32();
    return lo | (hi << 32);
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw ValidationError("checkpoint is truncated");
  }
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const TensorRecord* Checkpoint::find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::string SerializeCheckpoint(const Checkpoint& ckpt) {
  std::string out(kMagic, sizeof(kMagic));
  PutU32(out, kVersion);
  PutU32(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& t : ckpt.tensors) {
    if (t.data.size() != static_cast<std::size_t>(t.rows) * t.cols) {
      throw ShapeError("tensor " + t.name + " size does not match its shape");
    }
    PutU32(out, static_cast<std::uint32_t>(t.name.size()));
    out += t.name;
    PutU32(out, static_cast<std::uint32_t>(t.rows));
    PutU32(out, static_cast<std::uint32_t>(t.cols));
    for (float f : t.data) PutU32(out, std::bit_cast<std::uint32_t>(f));
  }
  const std::string meta = ckpt.meta.dump();
  PutU64(out, meta.size());
  out += meta;
  return out;
}

Checkpoint DeserializeCheckpoint(const std::string& bytes) {
  Reader r(bytes);
  if (r.str(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) {
    throw ValidationError("not a checkpoint file (bad magic)");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw ValidationError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  const std::uint32_t n = r.u32();
  ckpt.tensors.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    TensorRecord t;
    t.name = r.str(r.u32());
    t.rows = static_cast<int>(r.u32());
    t.cols = static_cast<int>(r.u32());
    t.data.resize(static_cast<std::size_t>(t.rows) * t.cols);
    for (float& f : t.data) f = std::bit_cast<float>(r.u32());
    ckpt.tensors.push_back(std::move(t));
  }
  const std::string meta = r.str(r.u64());
  if (!r.at_end()) throw ValidationError("trailing bytes after checkpoint");
  try {
    ckpt.meta = nlohmann::json::parse(meta);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("checkpoint metadata: ") + e.what());
  }
  return ckpt;
}

void WriteCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  const std::string bytes = SerializeCheckpoint(ckpt);
  // Write then rename so a crash never leaves a half-written checkpoint.
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint ReadCheckpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return DeserializeCheckpoint(ss.str());
}

void AddParams(Checkpoint& ckpt, const std::string& prefix,
               const ParamSet<float>& params) {
  const auto& layout = params.layout();
  for (int i = 0; i < static_cast<int>(layout.specs().size()); ++i) {
    const ParamSpec& s = layout.spec(i);
    TensorRecord t;
    t.name = prefix + "/" + s.name;
    t.rows = s.rows;
    t.cols = s.cols;
    const auto flat = params.flat().subspan(s.offset, s.size());
    t.data.assign(flat.begin(), flat.end());
    ckpt.tensors.push_back(std::move(t));
  }
}

void LoadParams(const Checkpoint& ckpt, const std::string& prefix,
                ParamSet<float>& params) {
  const auto& layout = params.layout();
  for (int i = 0; i < static_cast<int>(layout.specs().size()); ++i) {
    const ParamSpec& s = layout.spec(i);
    const std::string name = prefix + "/" + s.name;
    const TensorRecord* t = ckpt.find(name);
    if (t == nullptr) throw ValidationError("checkpoint lacks tensor " + name);
    if (t->rows != s.rows || t->cols != s.cols) {
      throw ShapeError("checkpoint tensor " + name + " has shape " +
                       std::to_string(t->rows) + "x" + std::to_string(t->cols) +
                       ", expected " + std::to_string(s.rows) + "x" +
                       std::to_string(s.cols));
    }
    std::copy(t->data.begin(), t->data.end(),
              params.flat().begin() + static_cast<std::ptrdiff_t>(s.offset));
  }
}

void AddAgent(Checkpoint& ckpt, const std::string& prefix, const Agent& agent) {
  AddParams(ckpt, prefix + "/params", agent.params);
  AddParams(ckpt, prefix + "/adam_m", agent.opt.m);
  AddParams(ckpt, prefix + "/adam_v", agent.opt.v);
  ckpt.meta["adam_steps"][prefix] = agent.opt.step;
}

void LoadAgent(const Checkpoint& ckpt, const std::string& prefix, Agent& agent) {
  LoadParams(ckpt, prefix + "/params", agent.params);
  LoadParams(ckpt, prefix + "/adam_m", agent.opt.m);
  LoadParams(ckpt, prefix + "/adam_v", agent.opt.v);
  try {
    agent.opt.step = ckpt.meta.at("adam_steps").at(prefix).get<std::int64_t>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("checkpoint lacks the Adam step count for " + prefix);
  }
}

}  // namespace ued::agents
