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

#include "cpmgoc/grape.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "cpmgoc/objective.hpp"
#include "cpmgoc/parallel.hpp"
#include "cpmgoc/random.hpp"

namespace cpmgoc {

namespace {

constexpr cplx kMinusI{0.0, -1.0};

// Tr(A B^dagger)
cplx inner(const Mat2 &a, const Mat2 &b) {
    return a(0, 0) * std::conj(b(0, 0)) + a(0, 1) * std::conj(b(0, 1)) + a(1, 0) * std::conj(b(1, 0)) +
           a(1, 1) * std::conj(b(1, 1));
}

PulseWaveform apply_update(const PulseWaveform &p, const std::vector<std::array<double, 2>> &grads, double step) {
    std::vector<PulseStep> steps(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        Cartesian c = to_cartesian(p.step(j));
        c.u1 += step * grads[j][0];
        c.u2 += step * grads[j][1];
        steps[j] = to_polar(c);
    }
    return clip_amplitudes(p.with_steps(std::move(steps)));
}

bool all_finite(const FidelityGradient &fg) {
    if (!std::isfinite(fg.fidelity)) {
        return false;
    }
    return std::all_of(fg.grads.begin(), fg.grads.end(),
                       [](const auto &g) { return std::isfinite(g[0]) && std::isfinite(g[1]); });
}

}  // namespace

void GrapeConfig::validate() const {
    if (!(improvement_threshold > 0.0)) {
        throw std::invalid_argument("improvement_threshold must be > 0");
    }
    if (!(target_fidelity > 0.0 && target_fidelity <= 1.0)) {
        throw std::invalid_argument("target_fidelity must be in (0, 1]");
    }
    if (!(step_size_init > 0.0)) {
        throw std::invalid_argument("step_size_init must be > 0");
    }
    if (!(line_search.growth >= 1.0) || !(line_search.shrink > 0.0 && line_search.shrink < 1.0) ||
        line_search.max_probes < 1) {
        throw std::invalid_argument("invalid line search settings");
    }
    if (max_iterations < 0 || stall_patience < 1) {
        throw std::invalid_argument("iteration limits must be positive");
    }
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::target_reached: return "target_reached";
        case Termination::stalled: return "stalled";
        case Termination::max_iterations: return "max_iterations";
    }
    return "unknown";
}

NumericalFailure::NumericalFailure(int iteration)
    : std::runtime_error("numerical failure at iteration " + std::to_string(iteration)), iteration_(iteration) {}

FidelityGradient fidelity_and_gradients(const PulseWaveform &p, const IsochromatPoint &point,
                                        const Su2Operator &target) {
    const std::size_t n = p.size();
    const double dw = point.delta_omega;
    const double w1 = point.omega1_scale;

    // forward[j] = U_j ... U_1 F_pre  (X_j)
    std::vector<Su2Operator> steps(n);
    std::vector<Su2Operator> forward(n);
    Su2Operator x = free_precession(dw, p.pre_delay());
    for (std::size_t j = 0; j < n; ++j) {
        steps[j] = step_propagator(p.step(j), p.dt(), dw, w1);
        x = steps[j] * x;
        forward[j] = x;
    }

    // back = U_{j+1}^dag ... U_N^dag F_post^dag U_targ  (P_j)
    Su2Operator back = free_precession(dw, p.post_delay()).adjoint() * target;
    const cplx overlap = n > 0 ? inner(forward[n - 1], back) : inner(x, back);  // Tr(P^dag X), same for all j

    FidelityGradient out;
    out.fidelity = std::norm(overlap) / 4.0;
    out.grads.resize(n);
    // dPhi/du_k = Re(conj(c) <P| -i dt dH/du_k X>) / 2 with dH/du_k = (w1/2) sigma_k
    const cplx prefactor = std::conj(overlap) * kMinusI * (0.25 * p.dt() * w1);
    for (std::size_t j = n; j-- > 0;) {
        Mat2 m = forward[j] * back.adjoint();  // Tr(P^dag s X) = Tr(s X P^dag)
        cplx tx = m(1, 0) + m(0, 1);
        cplx ty = cplx{0.0, 1.0} * (m(0, 1) - m(1, 0));
        out.grads[j] = {(prefactor * tx).real(), (prefactor * ty).real()};
        back = steps[j].adjoint() * back;
    }
    return out;
}

FidelityGradient average_fidelity_and_gradients(const PulseWaveform &p, const EnsembleDistribution &d,
                                                const Su2Operator &target) {
    std::vector<FidelityGradient> per_point(d.size());
    parallel_for(d.size(), [&](std::size_t i) { per_point[i] = fidelity_and_gradients(p, d[i], target); });

    FidelityGradient out;
    out.grads.assign(p.size(), {0.0, 0.0});
    for (std::size_t i = 0; i < d.size(); ++i) {
        double w = d[i].weight;
        out.fidelity += w * per_point[i].fidelity;
        for (std::size_t j = 0; j < p.size(); ++j) {
            out.grads[j][0] += w * per_point[i].grads[j][0];
            out.grads[j][1] += w * per_point[i].grads[j][1];
        }
    }
    return out;
}

double average_fidelity(const PulseWaveform &p, const EnsembleDistribution &d, const Su2Operator &target) {
    std::vector<double> per_point(d.size());
    parallel_for(d.size(), [&](std::size_t i) {
        per_point[i] = unitary_fidelity(pulse_propagator(p, d[i].delta_omega, d[i].omega1_scale), target);
    });
    double sum = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        sum += d[i].weight * per_point[i];
    }
    return sum;
}

GrapeReport grape_ascend(const PulseWaveform &p0, const EnsembleDistribution &d, const Su2Operator &target,
                         const GrapeConfig &cfg) {
    cfg.validate();
    if (!p0.within_cap()) {
        throw std::invalid_argument("initial waveform exceeds its amplitude cap");
    }

    GrapeReport report;
    PulseWaveform current = p0;
    FidelityGradient fg = average_fidelity_and_gradients(current, d, target);
    if (!all_finite(fg)) {
        throw NumericalFailure(0);
    }
    report.fidelity_history.push_back(fg.fidelity);
    report.trace.push_back({0, fg.fidelity, cfg.step_size_init});

    // Controls are stepped in units of a_max: u += eps * a_max^2 * dPhi/du.
    const double scale = p0.a_max() * p0.a_max();
    const auto &ls = cfg.line_search;
    double eps = cfg.step_size_init;
    int slow_iterations = 0;
    report.termination = Termination::max_iterations;

    const bool has_target = cfg.target_fidelity < 1.0;
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        if (has_target && fg.fidelity >= cfg.target_fidelity) {
            report.termination = Termination::target_reached;
            break;
        }

        struct Probe {
            double eps;
            double fidelity;
            PulseWaveform waveform;
        };
        auto probe = [&](double e) {
            PulseWaveform w = apply_update(current, fg.grads, e * scale);
            double f = average_fidelity(w, d, target);
            return Probe{e, f, std::move(w)};
        };

        std::optional<Probe> best;
        int probes = 1;
        Probe trial = probe(eps);
        if (trial.fidelity > fg.fidelity) {
            best = std::move(trial);
            while (probes < ls.max_probes) {
                Probe bigger = probe(best->eps * ls.growth);
                ++probes;
                if (bigger.fidelity <= best->fidelity) {
                    break;
                }
                best = std::move(bigger);
            }
        } else {
            double e = eps;
            while (probes < ls.max_probes) {
                e *= ls.shrink;
                Probe smaller = probe(e);
                ++probes;
                if (smaller.fidelity > fg.fidelity) {
                    best = std::move(smaller);
                    break;
                }
            }
        }

        report.iterations = iter;
        if (!best) {
            // No step along the gradient improves the fidelity.
            report.termination = Termination::stalled;
            break;
        }

        double improvement = best->fidelity - fg.fidelity;
        eps = best->eps;
        current = std::move(best->waveform);
        fg = average_fidelity_and_gradients(current, d, target);
        if (!all_finite(fg)) {
            throw NumericalFailure(iter);
        }
        report.fidelity_history.push_back(fg.fidelity);
        report.trace.push_back({iter, fg.fidelity, eps});

        slow_iterations = improvement < cfg.improvement_threshold ? slow_iterations + 1 : 0;
        if (slow_iterations >= cfg.stall_patience) {
            report.termination = Termination::stalled;
            break;
        }
    }
    if (report.termination == Termination::max_iterations && has_target && fg.fidelity >= cfg.target_fidelity) {
        report.termination = Termination::target_reached;
    }
    report.final_waveform = std::move(current);
    return report;
}

std::vector<double> multistart_histogram(const WaveformShape &shape, const EnsembleDistribution &d,
                                         const Su2Operator &target, const GrapeConfig &cfg, int n_starts,
                                         std::uint64_t seed) {
    if (n_starts < 1) {
        throw std::invalid_argument("n_starts must be >= 1");
    }
    std::vector<double> finals(static_cast<std::size_t>(n_starts));
    parallel_for(finals.size(), [&](std::size_t k) {
        PulseWaveform start = random_waveform(shape, mix_seed(seed, k));
        finals[k] = grape_ascend(start, d, target, cfg).final_fidelity();
    });
    std::sort(finals.begin(), finals.end());
    return finals;
}

}  // namespace cpmgoc
