// Copyright 2026 The mleak Authors
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

#include "mleak/noise_models.hpp"

#include <cmath>
#include <numbers>

#include "mleak/special_math.hpp"

namespace mleak {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_scale(const NoiseSpec& spec) {
  if (!(spec.scale > 0) || !std::isfinite(spec.scale)) {
    throw Error(ErrorCode::kDomainError, "noise scale must be positive");
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> stream) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t s : stream) h = splitmix64(h ^ splitmix64(s + 0x632be59bd9b4e019ULL));
  return h;
}

double density_at_zero_1d(const NoiseSpec& spec) {
  check_scale(spec);
  switch (spec.family) {
    case NoiseFamily::kGaussianIso:
      return 1.0 / (spec.scale * std::sqrt(2.0 * std::numbers::pi));
    case NoiseFamily::kLaplaceIid:
      return spec.scale / 2.0;
    case NoiseFamily::kUniformIid:
      return 1.0 / (2.0 * spec.scale);
  }
  return 0.0;
}

double log_density_1d(const NoiseSpec& spec, double x) {
  const double s = spec.scale;
  switch (spec.family) {
    case NoiseFamily::kGaussianIso:
      return -0.5 * std::log(2.0 * std::numbers::pi * s * s) -
             x * x / (2.0 * s * s);
    case NoiseFamily::kLaplaceIid:
      return std::log(s / 2.0) - s * std::abs(x);
    case NoiseFamily::kUniformIid:
      // Closed support: the boundary carries density 1/(2a).
      return std::abs(x) <= s ? -std::log(2.0 * s) : kNegInf;
  }
  return kNegInf;
}

double std_per_coord(const NoiseSpec& spec) {
  return std::sqrt(variance_per_coord(spec));
}

double variance_per_coord(const NoiseSpec& spec) {
  check_scale(spec);
  const double s = spec.scale;
  switch (spec.family) {
    case NoiseFamily::kGaussianIso:
      return s * s;
    case NoiseFamily::kLaplaceIid:
      return 2.0 / (s * s);
    case NoiseFamily::kUniformIid:
      return s * s / 3.0;
  }
  return 0.0;
}

NoiseSpec noise_from_variance(NoiseFamily family, double variance) {
  if (!(variance > 0)) {
    throw Error(ErrorCode::kDomainError, "variance must be positive");
  }
  switch (family) {
    case NoiseFamily::kGaussianIso:
      return NoiseSpec::Gaussian(std::sqrt(variance));
    case NoiseFamily::kLaplaceIid:
      return NoiseSpec::Laplace(std::sqrt(2.0 / variance));
    case NoiseFamily::kUniformIid:
      return NoiseSpec::Uniform(std::sqrt(3.0 * variance));
  }
  return {};
}

NoiseSpec dilate(const NoiseSpec& spec, double factor) {
  if (!(factor > 0)) throw Error(ErrorCode::kDomainError, "dilation must be > 0");
  NoiseSpec out = spec;
  // Laplace's native parameter is a rate, so it shrinks.
  out.scale = spec.family == NoiseFamily::kLaplaceIid ? spec.scale / factor
                                                      : spec.scale * factor;
  return out;
}

double log_density(const NoiseAtom& atom,
                   const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != atom.d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "point has dimension " + std::to_string(x.size()) +
                    ", noise has " + std::to_string(atom.d));
  }
  check_scale(atom.spec);
  const double s = atom.spec.scale;
  const double d = atom.d;
  switch (atom.spec.family) {
    case NoiseFamily::kGaussianIso:
      return -0.5 * d * std::log(2.0 * std::numbers::pi * s * s) -
             x.squaredNorm() / (2.0 * s * s);
    case NoiseFamily::kLaplaceIid:
      return d * std::log(s / 2.0) - s * x.lpNorm<1>();
    case NoiseFamily::kUniformIid:
      return x.lpNorm<Eigen::Infinity>() <= s ? -d * std::log(2.0 * s)
                                               : kNegInf;
  }
  return kNegInf;
}

double log_density_at_zero(const NoiseAtom& atom) {
  return atom.d * std::log(density_at_zero_1d(atom.spec));
}

Eigen::VectorXd sample(const NoiseAtom& atom, Engine& engine) {
  check_scale(atom.spec);
  Eigen::VectorXd out(atom.d);
  const double s = atom.spec.scale;
  switch (atom.spec.family) {
    case NoiseFamily::kGaussianIso: {
      std::normal_distribution<double> normal(0.0, s);
      for (int i = 0; i < atom.d; ++i) out[i] = normal(engine);
      break;
    }
    case NoiseFamily::kLaplaceIid: {
      std::exponential_distribution<double> expo(s);
      std::bernoulli_distribution sign(0.5);
      for (int i = 0; i < atom.d; ++i) {
        const double e = expo(engine);
        out[i] = sign(engine) ? e : -e;
      }
      break;
    }
    case NoiseFamily::kUniformIid: {
      std::uniform_real_distribution<double> uni(-s, s);
      for (int i = 0; i < atom.d; ++i) out[i] = uni(engine);
      break;
    }
  }
  return out;
}

Eigen::VectorXd sample(const NoiseAtom& atom, std::uint64_t seed) {
  Engine engine(seed);
  return sample(atom, engine);
}

}  // namespace mleak
