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

#include "cpmgoc/channel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cpmgoc/parallel.hpp"

namespace cpmgoc {

namespace {

using Block = Rotation3;

constexpr double kNegativeEigenTolerance = 1e-6;
constexpr double kDroppedProbability = 1e-12;

SuperoperatorMatrix from_block(const Block &b, int n) {
    SuperoperatorMatrix s = SuperoperatorMatrix::identity(n);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            s(i + 1, j + 1) = b[i][j];
        }
    }
    return s;
}

// Weighted sum of per-point blocks in point order.
SuperoperatorMatrix weighted_average(const std::vector<Block> &blocks, const std::vector<double> &weights, int n) {
    Block acc{};
    for (std::size_t p = 0; p < blocks.size(); ++p) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                acc[i][j] += weights[p] * blocks[p][i][j];
            }
        }
    }
    return from_block(acc, n);
}

std::vector<double> weights_of(const EnsembleDistribution &d) {
    std::vector<double> w(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        w[i] = d[i].weight;
    }
    return w;
}

}  // namespace

SuperoperatorMatrix SuperoperatorMatrix::identity(int n_cycles) {
    SuperoperatorMatrix s;
    for (int i = 0; i < 4; ++i) {
        s(i, i) = 1.0;
    }
    s.n_cycles = n_cycles;
    return s;
}

double SuperoperatorMatrix::max_abs_diff(const SuperoperatorMatrix &other) const {
    double m = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            m = std::max(m, std::abs(entries[i][j] - other.entries[i][j]));
        }
    }
    return m;
}

SuperoperatorMatrix transfer_matrix(const Su2Operator &u) { return from_block(so3_matrix(u), 1); }

SuperoperatorMatrix pauli_channel(const std::array<double, 4> &p) {
    SuperoperatorMatrix s;
    s(0, 0) = p[0] + p[1] + p[2] + p[3];
    s(1, 1) = p[0] + p[1] - p[2] - p[3];
    s(2, 2) = p[0] - p[1] + p[2] - p[3];
    s(3, 3) = p[0] - p[1] - p[2] + p[3];
    return s;
}

SuperoperatorMatrix average_power_channel(const IsochromatPropagators &cycles, int n) {
    if (n < 0) {
        throw std::invalid_argument("cycle count must be >= 0");
    }
    std::vector<Block> blocks(cycles.size());
    std::vector<double> weights(cycles.size());
    parallel_for(cycles.size(), [&](std::size_t i) {
        blocks[i] = so3_matrix(power(cycles[i].propagator, static_cast<std::uint64_t>(n)));
        weights[i] = cycles[i].weight;
    });
    return weighted_average(blocks, weights, n);
}

SuperoperatorMatrix build_superoperator(const RefocusingPulse &p, double tau, const EnsembleDistribution &d, int n) {
    if (n < 1) {
        throw std::invalid_argument("cycle count must be >= 1");
    }
    IsochromatPropagators cycles(d.size());
    parallel_for(d.size(), [&](std::size_t i) {
        const auto &pt = d[i];
        cycles[i] = {pt.delta_omega, pt.omega1_scale, pt.weight,
                     cycle_propagator(p, tau, pt.delta_omega, pt.omega1_scale)};
    });
    return average_power_channel(cycles, n);
}

std::vector<SuperoperatorMatrix> superoperator_series(const RefocusingPulse &p, double tau,
                                                      const EnsembleDistribution &d, int n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("cycle count must be >= 1");
    }
    const auto n = static_cast<std::size_t>(n_max);
    // powers[i][k] is point i's block after k + 1 cycles.
    std::vector<std::vector<Block>> powers(d.size());
    parallel_for(d.size(), [&](std::size_t i) {
        const auto &pt = d[i];
        UnitaryAccumulator acc;
        Su2Operator cycle = cycle_propagator(p, tau, pt.delta_omega, pt.omega1_scale);
        powers[i].resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            acc.left_multiply(cycle);
            powers[i][k] = so3_matrix(acc.value());
        }
    });
    std::vector<double> weights = weights_of(d);
    std::vector<SuperoperatorMatrix> out(n);
    std::vector<Block> column(d.size());
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < d.size(); ++i) {
            column[i] = powers[i][k];
        }
        out[k] = weighted_average(column, weights, static_cast<int>(k + 1));
    }
    return out;
}

std::vector<KrausTerm> choi_kraus(const SuperoperatorMatrix &s) {
    for (int a = 0; a < 4; ++a) {
        if (std::abs(s(0, a) - (a == 0 ? 1.0 : 0.0)) > 1e-8) {
            throw std::invalid_argument("superoperator is not trace preserving");
        }
    }
    // E(|i><j|) from the Pauli expansion of the matrix units.
    const std::array<Mat2, 4> paulis{Mat2::identity(), pauli_x(), pauli_y(), pauli_z()};
    auto channel = [&](const Mat2 &rho) {
        Mat2 out = Mat2::zero();
        for (int a = 0; a < 4; ++a) {
            cplx coeff = 0.5 * (paulis[a] * rho).trace();
            if (coeff == cplx{}) {
                continue;
            }
            for (int b = 0; b < 4; ++b) {
                out = out + (coeff * s(b, a)) * paulis[b];
            }
        }
        return out;
    };
    Eigen::Matrix4cd choi = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Mat2 unit = Mat2::zero();
            unit(i, j) = 1.0;
            Mat2 e = channel(unit);
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) {
                    choi(2 * i + r, 2 * j + c) = e(r, c);
                }
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(choi);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Choi eigendecomposition failed");
    }
    std::vector<KrausTerm> terms;
    for (int k = 3; k >= 0; --k) {
        double lambda = solver.eigenvalues()(k);
        if (lambda < -kNegativeEigenTolerance) {
            throw std::runtime_error("not completely positive");
        }
        double prob = std::max(lambda, 0.0) / 2.0;
        if (prob < kDroppedProbability) {
            continue;
        }
        Eigen::Vector4cd v = solver.eigenvectors().col(k);
        KrausTerm t;
        t.probability = prob;
        // (I (x) A)|Omega> = sum_i |i> (x) A|i>, so v[2 i + r] = A[r][i].
        Mat2 unit{v(0), v(2), v(1), v(3)};
        t.unitary = cplx{std::sqrt(2.0), 0.0} * unit;
        t.op = cplx{std::sqrt(lambda), 0.0} * unit;
        terms.push_back(t);
    }
    return terms;
}

Mat2 kraus_completeness(const std::vector<KrausTerm> &terms) {
    Mat2 sum = Mat2::zero();
    for (const auto &t : terms) {
        sum = sum + t.op.adjoint() * t.op;
    }
    return sum;
}

PauliProbabilities pauli_probabilities(const SuperoperatorMatrix &s) {
    PauliProbabilities out;
    double rxx = s(1, 1), ryy = s(2, 2), rzz = s(3, 3);
    out.p = {(1 + rxx + ryy + rzz) / 4, (1 + rxx - ryy - rzz) / 4, (1 - rxx + ryy - rzz) / 4,
             (1 - rxx - ryy + rzz) / 4};
    double off = 0.0;
    for (int i = 1; i < 4; ++i) {
        for (int j = 1; j < 4; ++j) {
            if (i != j) {
                off += s(i, j) * s(i, j);
            }
        }
    }
    out.off_diagonal_residual = std::sqrt(off);
    return out;
}

std::array<double, 4> PauliModel::probabilities(int n) const {
    // Without a decay the model reduces to its constants.
    double e = std::isinf(t2_pulse_cycles) ? 0.0 : std::exp(-n / t2_pulse_cycles);
    return {c_i + 0.5 * e, c_x, c_y - 0.5 * e, c_z};
}

PauliModel fit_pauli_model(const std::vector<std::array<double, 4>> &per_cycle_probs, double cycle_time,
                           double tail_fraction) {
    if (per_cycle_probs.size() < 3) {
        throw std::invalid_argument("insufficient samples for fit");
    }
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
        throw std::invalid_argument("tail fraction must be in (0, 1]");
    }
    const std::size_t n = per_cycle_probs.size();
    const auto tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(tail_fraction * n)));
    std::array<double, 4> c{};
    for (std::size_t k = n - tail; k < n; ++k) {
        for (int i = 0; i < 4; ++i) {
            c[i] += per_cycle_probs[k][i];
        }
    }
    for (auto &v : c) {
        v /= static_cast<double>(tail);
    }

    PauliModel m;
    m.c_i = c[0];
    m.c_x = c[1];
    m.c_y = c[2];
    m.c_z = c[3];
    m.cycle_time = cycle_time;
    m.m_infinity = m.c_i + m.c_y - (m.c_x + m.c_z);
    m.t2_pulse_cycles = std::numeric_limits<double>::infinity();

    const double excess0 = 1.0 - m.c_i;
    if (excess0 > 1e-12) {
        const double threshold = excess0 / std::numbers::e;
        double prev = excess0;  // n = 0
        for (std::size_t k = 0; k < n; ++k) {
            double cur = per_cycle_probs[k][0] - m.c_i;
            if (cur <= threshold) {
                m.t2_pulse_cycles = static_cast<double>(k) + (prev - threshold) / (prev - cur);
                break;
            }
            prev = cur;
        }
    }
    m.t2_pulse = m.t2_pulse_cycles * cycle_time;
    return m;
}

double superoperator_overlap(const SuperoperatorMatrix &a, const SuperoperatorMatrix &b) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            ab += a(i, j) * b(i, j);
            aa += a(i, j) * a(i, j);
            bb += b(i, j) * b(i, j);
        }
    }
    return ab / std::sqrt(aa * bb);
}

PauliChannelFit analyze_series(const std::vector<SuperoperatorMatrix> &series, double cycle_time,
                               double tail_fraction) {
    PauliChannelFit fit;
    for (const auto &s : series) {
        PauliProbabilities pp = pauli_probabilities(s);
        fit.per_cycle_probs.push_back(pp.p);
        fit.max_off_diagonal = std::max(fit.max_off_diagonal, pp.off_diagonal_residual);
    }
    fit.model = fit_pauli_model(fit.per_cycle_probs, cycle_time, tail_fraction);
    for (std::size_t k = 0; k < series.size(); ++k) {
        fit.fit_overlap = std::min(fit.fit_overlap, superoperator_overlap(pauli_channel(fit.per_cycle_probs[k]), series[k]));
        fit.envelope_overlap = std::min(
            fit.envelope_overlap,
            superoperator_overlap(pauli_channel(fit.model.probabilities(static_cast<int>(k + 1))), series[k]));
    }
    return fit;
}

PauliChannelFit analyze_channel(const RefocusingPulse &p, double tau, const EnsembleDistribution &d,
                                const ChannelAnalysisOptions &options) {
    if (options.n_cycles < 3) {
        throw std::invalid_argument("insufficient samples for fit");
    }
    return analyze_series(superoperator_series(p, tau, d, options.n_cycles), cycle_time(p, tau),
                          options.tail_fraction);
}

SuperoperatorMatrix asymptotic_channel(const RefocusingPulse &p, double tau, const EnsembleDistribution &d) {
    std::vector<Block> blocks(d.size());
    parallel_for(d.size(), [&](std::size_t i) {
        const auto &pt = d[i];
        RotationDecomposition r = axis_angle(cycle_propagator(p, tau, pt.delta_omega, pt.omega1_scale));
        Block b{};
        if (std::sin(0.5 * r.theta) < 1e-9) {
            // The cycle is +-I: every power leaves the state alone.
            b = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
        } else {
            for (int a = 0; a < 3; ++a) {
                for (int c = 0; c < 3; ++c) {
                    b[a][c] = r.axis[a] * r.axis[c];
                }
            }
        }
        blocks[i] = b;
    });
    SuperoperatorMatrix s = weighted_average(blocks, weights_of(d), 0);
    s.n_cycles = -1;
    return s;
}

}  // namespace cpmgoc
