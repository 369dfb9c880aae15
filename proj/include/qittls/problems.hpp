// Copyright 2026 The qittls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Benchmark inputs: six discretized Fredholm equations of the first kind,
// the additive noise model, and the Prony linear prediction system.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qittls/linalg.hpp"
#include "qittls/random.hpp"

namespace qittls {

struct TestProblem {
  std::string name;
  Matrix A;      // exact operator
  Vector b;      // exact right-hand side
  Vector x_true; // empty when the generator has no exact solution
  /// Bound on ||A x_true - b|| / ||b||: 1e-12 for gravity, heat and deriv2,
  /// and c / m^2 with c = 0.3 (foxgood), 8 (phillips), 0.6 (baart).
  double consistency_tol = 0.0;
};

/// foxgood, gravity, heat, phillips, baart, deriv2.
const std::vector<std::string>& problem_names();

/// Square m x m discretization; m >= 8. Throws Error(kUnknownProblem) for an
/// unknown name. heat needs m even and phillips needs m divisible by 4.
///
/// foxgood  K(s,t) = sqrt(s^2 + t^2) on [0,1]^2, midpoint rule, f(t) = t,
///          g(s) = ((1+s^2)^1.5 - s^3) / 3.
/// gravity  K(s,t) = d (d^2 + (s-t)^2)^-1.5 with d = 0.25 on [0,1]^2,
///          midpoint rule, f(t) = sin(pi t) + 0.5 sin(2 pi t), b = A x.
/// heat     inverse heat equation with kappa = 1 on [0,1]: lower triangular
///          Toeplitz of k(t) = t^-1.5 exp(-1/(4 t)) / (2 sqrt(pi)) at the
///          midpoints, times h; piecewise x on the first half, b = A x.
/// phillips K(s,t) = phi(s-t), phi(u) = 1 + cos(pi u / 3) for |u| < 3, on
///          [-6,6]^2; Galerkin with box functions, x = phi projected onto
///          the boxes.
/// baart    K(s,t) = exp(s cos t) on [0,pi/2] x [0,pi], f(t) = sin t,
///          g(s) = 2 sinh(s) / s; Galerkin with box functions, Simpson in t.
/// deriv2   Green's function of -u'' on [0,1] with u(0) = u(1) = 0,
///          Galerkin with box functions, f(t) = t, g(s) = (s^3 - s) / 6.
TestProblem gen_problem(std::string_view name, std::size_t m);

struct NoisyProblem {
  Matrix A;
  Vector b;
};

/// A = A~ + eta ||A~||_F G / ||G||_F and b = b~ + eta ||b~|| zeta / ||zeta||,
/// with G (row-major) and then zeta drawn uniform on [-1, 1]. eta = 0 copies
/// the exact data without drawing.
NoisyProblem add_noise(const TestProblem& problem, double eta, Rng& rng);

struct PronySpec {
  /// Every pole listed explicitly; the set must be closed under conjugation
  /// with conjugate residues.
  std::vector<std::complex<double>> poles;
  std::vector<std::complex<double>> residues;
  double t_step = 0.2;
  std::size_t m = 0;
  std::size_t n = 0;
};

/// Six damped pole pairs with unit residues.
PronySpec default_prony_spec(std::size_t m, std::size_t n, double t_step = 0.2);

/// Pole file: one pole per line as "re im gamma_re [gamma_im]"; '#' starts a
/// comment. Conjugates must be listed explicitly.
PronySpec read_pole_file(const std::string& path, std::size_t m, std::size_t n, double t_step);

/// y_l = sum_j gamma_j exp(lambda_j t l) for l = 0, ..., count-1. Throws
/// Error(kInvalidArgument) when an imaginary part exceeds 1e-10 relative.
Vector prony_signal(const PronySpec& signal, std::size_t count);

/// A_n = [a_1, ..., a_n] with a_j = (y_{j-1}, ..., y_{j+m-2}) and b = -a_{n+1}.
/// Requires m >= n and m >= number of poles, and checks that the numerical
/// rank of A_n at 1e-8 sigma_1 equals min(n, number of poles).
TestProblem gen_prony(const PronySpec& signal);

/// C = Q1 diag(sigma) Q2^T where Q1 is the first n1 columns and Q2 all of a
/// randomly signed and permuted normalized Hadamard matrix of order m and n1.
/// Every row of C has squared norm sum(sigma^2) / m and every column
/// sum(sigma^2) / n1. m and n1 must be powers of two with m >= n1 and
/// sigma.size() <= n1 (missing entries are zero).
Matrix planted_spectrum_toy(std::size_t m, std::size_t n1, const Vector& sigma, Rng& rng);

/// ||x - x_ref||_inf / ||x_ref||_inf; throws on a zero reference.
double rel_err_inf(std::span<const double> x, std::span<const double> x_ref);

}  // namespace qittls
