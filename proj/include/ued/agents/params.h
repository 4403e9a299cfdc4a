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

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

namespace ued::agents {

template <class S>
using RowMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class S>
using RowVec = Eigen::Matrix<S, 1, Eigen::Dynamic>;

/// 64-byte aligned allocation. Eigen peels vectorized reductions according
/// to the runtime address, so buffers mapped into Eigen need a fixed
/// alignment for results to be bit-reproducible across runs.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlign{64};

  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), kAlign));
  }
  void deallocate(T* p, std::size_t) { ::operator delete(p, kAlign); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const { return true; }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

struct ParamSpec {
  std::string name;
  int rows = 0;
  int cols = 0;  // 1-D tensors are stored as a single row: rows = 1
  std::size_t offset = 0;

  std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
  bool is_vector() const { return rows == 1; }
};

/// Ordered list of named tensors packed into one flat buffer.
class ParamLayout {
 public:
  int add(std::string name, int rows, int cols);
  const std::vector<ParamSpec>& specs() const { return specs_; }
  const ParamSpec& spec(int i) const { return specs_[i]; }
  std::size_t total() const { return total_; }
  int find(const std::string& name) const;  // -1 if absent

  bool operator==(const ParamLayout& other) const;

 private:
  std::vector<ParamSpec> specs_;
  std::size_t total_ = 0;
};

/// Flat parameter (or gradient) storage with typed matrix views.
template <class S>
class ParamSet {
 public:
  using Map = Eigen::Map<RowMat<S>>;
  using ConstMap = Eigen::Map<const RowMat<S>>;

  ParamSet() = default;
  explicit ParamSet(std::shared_ptr<const ParamLayout> layout)
      : layout_(std::move(layout)), data_(layout_->total(), S(0)) {}

  const ParamLayout& layout() const { return *layout_; }
  const std::shared_ptr<const ParamLayout>& layout_ptr() const {
    return layout_;
  }

  Map operator[](int i) {
    const ParamSpec& s = layout_->spec(i);
    return Map(data_.data() + s.offset, s.rows, s.cols);
  }
  ConstMap operator[](int i) const {
    const ParamSpec& s = layout_->spec(i);
    return ConstMap(data_.data() + s.offset, s.rows, s.cols);
  }

  std::span<S> flat() { return data_; }
  std::span<const S> flat() const { return data_; }
  std::size_t size() const { return data_.size(); }

  void set_zero() { std::fill(data_.begin(), data_.end(), S(0)); }

  template <class T>
  ParamSet<T> cast() const {
    ParamSet<T> out(layout_);
    for (std::size_t i = 0; i < data_.size(); ++i) {
      out.flat()[i] = static_cast<T>(data_[i]);
    }
    return out;
  }

  bool operator==(const ParamSet& other) const { return data_ == other.data_; }

 private:
  std::shared_ptr<const ParamLayout> layout_;
  AlignedVector<S> data_;
};

// FNV-1a over the raw bytes; used to detect whether parameters changed.
std::uint64_t HashParams(std::span<const float> values);

bool AllFinite(std::span<const float> values);

}  // namespace ued::agents
