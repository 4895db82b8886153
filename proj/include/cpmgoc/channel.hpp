// Copyright 2026 The cpmgoc Authors.
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

#ifndef CPMGOC_CHANNEL_HPP
#define CPMGOC_CHANNEL_HPP

#include <array>
#include <vector>

#include "cpmgoc/propagation.hpp"

namespace cpmgoc {

/// Pauli transfer matrix R(beta, alpha) = Tr(s_beta E(s_alpha)) / 2 over
/// (I, x, y, z).
struct SuperoperatorMatrix {
    std::array<std::array<double, 4>, 4> entries{};
    int n_cycles = 0;

    double operator()(int beta, int alpha) const { return entries[beta][alpha]; }
    double &operator()(int beta, int alpha) { return entries[beta][alpha]; }
    static SuperoperatorMatrix identity(int n_cycles = 0);
    double max_abs_diff(const SuperoperatorMatrix &other) const;
};

SuperoperatorMatrix transfer_matrix(const Su2Operator &u);

/// Pauli channel sum_i p_i s_i rho s_i.
SuperoperatorMatrix pauli_channel(const std::array<double, 4> &p);

/// Weighted average of U_cycle^n (.) U_cycle^-n, each point raised to the
/// n-th power before averaging.
SuperoperatorMatrix build_superoperator(const RefocusingPulse &p, double tau, const EnsembleDistribution &d, int n);

/// build_superoperator for n = 1 .. n_max.
std::vector<SuperoperatorMatrix> superoperator_series(const RefocusingPulse &p, double tau,
                                                      const EnsembleDistribution &d, int n_max);

/// Same average for explicit per-point cycle propagators.
SuperoperatorMatrix average_power_channel(const IsochromatPropagators &cycles, int n);

struct KrausTerm {
    double probability = 0.0;
    Mat2 unitary;  // A = sqrt(probability) * unitary
    Mat2 op;       // the Kraus operator A itself
};

/// Canonical Kraus decomposition from the Choi matrix eigenvectors, sorted by
/// decreasing probability. Throws "not completely positive" for an eigenvalue
/// below -1e-6 and std::invalid_argument for a non trace-preserving map.
std::vector<KrausTerm> choi_kraus(const SuperoperatorMatrix &s);

/// sum_k A_k^dagger A_k.
Mat2 kraus_completeness(const std::vector<KrausTerm> &terms);

struct PauliProbabilities {
    std::array<double, 4> p{};  // I, x, y, z
    double off_diagonal_residual = 0.0;  // Frobenius norm of the off-diagonal 3x3 block
};

PauliProbabilities pauli_probabilities(const SuperoperatorMatrix &s);

struct PauliModel {
    double c_i = 0.0;
    double c_x = 0.0;
    double c_y = 0.0;
    double c_z = 0.0;
    double t2_pulse = 0.0;         // seconds, +inf if the identity weight never decays
    double t2_pulse_cycles = 0.0;  // t2_pulse / t_c
    double m_infinity = 0.0;
    double cycle_time = 0.0;

    /// Envelope model probabilities after n cycles.
    std::array<double, 4> probabilities(int n) const;
};

struct PauliChannelFit {
    std::vector<std::array<double, 4>> per_cycle_probs;  // entry k is cycle k + 1
    PauliModel model;
    double fit_overlap = 1.0;       // min over n of the Pauli-channel projection overlap
    double envelope_overlap = 1.0;  // min over n of the envelope-model overlap
    double max_off_diagonal = 0.0;
};

/// Tail means over the last tail_fraction of cycles give the constants; the
/// identity excess (p_I - c_I) / (1 - c_I), with p_I = 1 before the first
/// cycle, is interpolated linearly to its 1/e crossing.
PauliModel fit_pauli_model(const std::vector<std::array<double, 4>> &per_cycle_probs, double cycle_time,
                           double tail_fraction = 0.25);

/// Normalized Hilbert-Schmidt overlap Tr(A^T B) / sqrt(Tr(A^T A) Tr(B^T B)).
double superoperator_overlap(const SuperoperatorMatrix &a, const SuperoperatorMatrix &b);

struct ChannelAnalysisOptions {
    int n_cycles = 100;
    double tail_fraction = 0.25;
};

PauliChannelFit analyze_channel(const RefocusingPulse &p, double tau, const EnsembleDistribution &d,
                                const ChannelAnalysisOptions &options = {});

/// Fit from a precomputed superoperator series (entry k is n = k + 1).
PauliChannelFit analyze_series(const std::vector<SuperoperatorMatrix> &series, double cycle_time,
                               double tail_fraction = 0.25);

/// n -> infinity limit: weighted average of (rho + (r.s) rho (r.s)) / 2 over
/// the cycle rotation axes.
SuperoperatorMatrix asymptotic_channel(const RefocusingPulse &p, double tau, const EnsembleDistribution &d);

}  // namespace cpmgoc

#endif  // CPMGOC_CHANNEL_HPP
