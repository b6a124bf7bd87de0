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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

#include "mleak/core_model.hpp"

namespace mleak {

/// A noise law together with the dimension it acts on. All three families are
/// products of i.i.d. symmetric, unimodal coordinates (the Gaussian one is
/// also isotropic).
struct NoiseAtom {
  NoiseSpec spec;
  int d = 1;
};

// Mixes a master seed with stream indices (step, trial, ...) so that every
// stream is a pure function of its coordinates, independent of the order in
// which streams are consumed.
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> stream);

using Engine = std::mt19937_64;

/// f_{t0}(0), the per-coordinate density at the mode.
double density_at_zero_1d(const NoiseSpec& spec);
double log_density_1d(const NoiseSpec& spec, double x);
/// Per-coordinate standard deviation.
double std_per_coord(const NoiseSpec& spec);
double variance_per_coord(const NoiseSpec& spec);
/// Inverse of variance_per_coord for a given family.
NoiseSpec noise_from_variance(NoiseFamily family, double variance);
/// Same family, scale chosen so the per-coordinate std is multiplied by
/// `factor`.
NoiseSpec dilate(const NoiseSpec& spec, double factor);

double log_density(const NoiseAtom& atom, const Eigen::Ref<const Eigen::VectorXd>& x);
double log_density_at_zero(const NoiseAtom& atom);

Eigen::VectorXd sample(const NoiseAtom& atom, Engine& engine);
Eigen::VectorXd sample(const NoiseAtom& atom, std::uint64_t seed);

}  // namespace mleak
