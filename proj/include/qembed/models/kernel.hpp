// Copyright 2026 The qembed Authors
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

#include <cmath>
#include <span>

#include "qembed/error.hpp"
#include "qembed/models/spec.hpp"

namespace qembed::models {

inline double kernel_eval(const KernelFn& k, std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::LengthMismatch, "kernel arguments differ in length");
  const double gamma = k.gamma.value_or(a.empty() ? 1.0 : 1.0 / static_cast<double>(a.size()));
  switch (k.kind) {
    case KernelFn::Kind::linear: {
      double dot = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
      return dot;
    }
    case KernelFn::Kind::polynomial: {
      double dot = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
      return std::pow(gamma * dot + k.coef0, k.degree);
    }
    case KernelFn::Kind::rbf: {
      double d2 = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
      return std::exp(-gamma * d2);
    }
    case KernelFn::Kind::sigmoid: {
      double dot = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
      return std::tanh(gamma * dot + k.coef0);
    }
  }
  return 0.0;
}

}  // namespace qembed::models
