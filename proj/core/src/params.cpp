// Copyright 2026 The fedagg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedagg/params.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fedagg/error.hpp"

namespace fedagg {
namespace {

constexpr char kMagic[4] = {'F', 'A', 'G', 'G'};
constexpr std::size_t kHeaderSize = 4 + 1 + 8;

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      std::ostringstream msg;
      msg << what << ": non-finite value at index " << i;
      throw std::invalid_argument(msg.str());
    }
  }
}

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    std::ostringstream msg;
    msg << "parameter length mismatch: " << a << " vs " << b;
    throw StructuralError(msg.str());
  }
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  return v;
}

}  // namespace

ParameterVector::ParameterVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("ParameterVector must not be empty");
  require_finite(values_, "ParameterVector");
}

ParameterVector::ParameterVector(std::initializer_list<double> values)
    : ParameterVector(std::vector<double>(values)) {}

ParameterVector ParameterVector::zeros(std::size_t length) {
  return ParameterVector(std::vector<double>(length, 0.0));
}

bool ParameterVector::bit_equal(const ParameterVector& other) const noexcept {
  return values_.size() == other.values_.size() &&
         std::memcmp(values_.data(), other.values_.data(), values_.size() * sizeof(double)) == 0;
}

ParameterVector scale(const ParameterVector& p, double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("scale: factor must be finite");
  std::vector<double> out(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) out[j] = c * p[j];
  return ParameterVector(std::move(out));
}

ParameterVector add(const ParameterVector& a, const ParameterVector& b) {
  require_same_length(a.size(), b.size());
  std::vector<double> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
  return ParameterVector(std::move(out));
}

ParameterVector mean(std::span<const ParameterVector> ps) {
  if (ps.empty()) throw std::invalid_argument("mean: empty input list");
  const std::size_t length = ps.front().size();
  for (const auto& p : ps) require_same_length(length, p.size());

  // Extended-precision accumulator: N identical inputs sum exactly, so the
  // mean of identical vectors is that vector.
  std::vector<long double> acc(length, 0.0L);
  for (const auto& p : ps) {
    for (std::size_t j = 0; j < length; ++j) acc[j] += p[j];
  }
  const auto n = static_cast<long double>(ps.size());
  std::vector<double> out(length);
  for (std::size_t j = 0; j < length; ++j) out[j] = static_cast<double>(acc[j] / n);
  return ParameterVector(std::move(out));
}

ParameterVector weighted_sum(std::span<const ParameterVector> ps, std::span<const double> ws) {
  if (ps.empty()) throw std::invalid_argument("weighted_sum: empty input list");
  if (ps.size() != ws.size()) {
    std::ostringstream msg;
    msg << "weighted_sum: " << ps.size() << " vectors but " << ws.size() << " weights";
    throw StructuralError(msg.str());
  }
  require_finite(ws, "weighted_sum weights");
  const std::size_t length = ps.front().size();
  for (const auto& p : ps) require_same_length(length, p.size());

  const double uniform = 1.0 / static_cast<double>(ws.size());
  const bool is_uniform = std::all_of(ws.begin(), ws.end(), [&](double w) {
    return std::bit_cast<std::uint64_t>(w) == std::bit_cast<std::uint64_t>(uniform);
  });
  if (is_uniform) return mean(ps);

  std::vector<double> out(length, 0.0);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double w = ws[i];
    const auto& p = ps[i];
    for (std::size_t j = 0; j < length; ++j) out[j] += w * p[j];
  }
  for (std::size_t j = 0; j < length; ++j) {
    if (!std::isfinite(out[j])) throw std::overflow_error("weighted_sum: result overflowed");
  }
  return ParameterVector(std::move(out));
}

std::vector<std::uint8_t> encode_checkpoint(const ParameterVector& p) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + 8 * p.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kCheckpointVersion);
  put_u64(out, p.size());
  for (double v : p.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

ParameterVector decode_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw std::invalid_argument("checkpoint: bad magic or truncated header");
  }
  if (bytes[4] != kCheckpointVersion) {
    throw std::invalid_argument("checkpoint: unsupported version " + std::to_string(bytes[4]));
  }
  const std::uint64_t length = get_u64(bytes.subspan(5, 8));
  if (length == 0 || (bytes.size() - kHeaderSize) / 8 != length ||
      (bytes.size() - kHeaderSize) % 8 != 0) {
    throw std::invalid_argument("checkpoint: payload size does not match declared length " +
                                std::to_string(length));
  }
  std::vector<double> values(length);
  for (std::uint64_t i = 0; i < length; ++i) {
    values[i] = std::bit_cast<double>(get_u64(bytes.subspan(kHeaderSize + 8 * i, 8)));
  }
  return ParameterVector(std::move(values));
}

void save_checkpoint(const std::filesystem::path& path, const ParameterVector& p) {
  const auto bytes = encode_checkpoint(p);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing checkpoint: " + path.string());
}

ParameterVector load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_checkpoint(bytes);
  } catch (const std::invalid_argument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace fedagg
