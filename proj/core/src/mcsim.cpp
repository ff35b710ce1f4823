// SPDX-License-Identifier: Apache-2.0
//
// moris - analysis and simulation of multi-operator RIS links
// Copyright (C) 2026 The moris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "moris/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <utility>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>

#include "moris/error.hpp"

namespace moris::mcsim {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kHermiteNodes = 200;
constexpr int kHermiteTerms = 60;
constexpr double kPsdRepairLimit = 1e-3;

struct HermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Probabilists' Gauss-Hermite rule (weight e^{-z^2/2} / sqrt(2 pi)). Nodes
// come from the Golub-Welsch eigenproblem; weights use the Christoffel form
// 1 / sum_k h_k(z)^2 with orthonormal h_k, which keeps full relative accuracy
// at the outer nodes where eigenvector entries are pure rounding noise.
const HermiteRule& hermite_rule() {
    static const HermiteRule rule = [] {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(kHermiteNodes, kHermiteNodes);
        for (int k = 1; k < kHermiteNodes; ++k) {
            J(k - 1, k) = J(k, k - 1) = std::sqrt(static_cast<double>(k));
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
        HermiteRule r;
        for (int i = 0; i < kHermiteNodes; ++i) {
            const double z = es.eigenvalues()(i);
            double prev = 0.0;
            double cur = 1.0;
            double sum = 1.0;
            for (int k = 1; k < kHermiteNodes; ++k) {
                const double next = (z * cur - std::sqrt(k - 1.0) * prev) / std::sqrt(static_cast<double>(k));
                prev = cur;
                cur = next;
                sum += cur * cur;
            }
            r.nodes.push_back(z);
            r.weights.push_back(1.0 / sum);
        }
        return r;
    }();
    return rule;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Gamma(shape, 1) quantile at probability Phi(z), computed from whichever
// tail keeps the probability argument accurate.
double gamma_quantile_of_normal(double shape, double z) {
    if (z < 0.0) return boost::math::gamma_p_inv(shape, normal_cdf(z));
    return boost::math::gamma_q_inv(shape, normal_cdf(-z));
}

// Squared normalized Hermite coefficients a_k^2, k = 1..K, of the Gamma
// quantile transform; cached per shape.
const std::vector<double>& hermite_power(double shape) {
    static std::mutex mutex;
    static std::map<double, std::vector<double>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(shape);
    if (it != cache.end()) return it->second;

    const HermiteRule& rule = hermite_rule();
    std::vector<double> coef(kHermiteTerms + 1, 0.0);
    for (int i = 0; i < kHermiteNodes; ++i) {
        const double z = rule.nodes[static_cast<std::size_t>(i)];
        const double w = rule.weights[static_cast<std::size_t>(i)];
        if (w == 0.0) continue;
        const double q = gamma_quantile_of_normal(shape, z);
        double prev = 1.0;  // h_0
        double cur = z;     // h_1
        coef[1] += w * q * cur;
        for (int k = 2; k <= kHermiteTerms; ++k) {
            const double next = (z * cur - std::sqrt(k - 1.0) * prev) / std::sqrt(static_cast<double>(k));
            prev = cur;
            cur = next;
            coef[static_cast<std::size_t>(k)] += w * q * cur;
        }
    }
    for (double& c : coef) c *= c;
    coef[0] = 0.0;
    return cache.emplace(shape, std::move(coef)).first->second;
}

void check_shape(double m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("copula shape must be finite and > 0");
}

// Symmetric factor A with A A^T = S, after clipping negative eigenvalues.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& S) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * w.asDiagonal();
}

}  // namespace

double sample_von_mises(double kappa, rng::Stream& stream) {
    if (!(kappa >= 0.0)) throw DomainError("sample_von_mises: kappa must be >= 0");
    if (kappa < 1e-8) return stream.uniform_angle();
    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
    const double r = (1.0 + rho * rho) / (2.0 * rho);
    double f = 0.0;
    for (;;) {
        const double u1 = stream.uniform();
        const double u2 = stream.uniform();
        const double z = std::cos(kPi * u1);
        f = (1.0 + r * z) / (r + z);
        const double c = kappa * (r - f);
        if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) break;
    }
    const double angle = std::acos(std::clamp(f, -1.0, 1.0));
    const double theta = stream.uniform() < 0.5 ? -angle : angle;
    return theta >= kPi ? -kPi : theta;
}

double copula_power_correlation(double r, double m) {
    check_shape(m);
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("copula_power_correlation: r must lie in [0, 1]");
    const std::vector<double>& a2 = hermite_power(m);
    double num = 0.0;
    double den = 0.0;
    double rk = 1.0;
    for (std::size_t k = 1; k < a2.size(); ++k) {
        rk *= r;
        num += a2[k] * rk;
        den += a2[k];
    }
    return num / den;
}

double calibrate_copula(double c_target, double m) {
    check_shape(m);
    if (!(c_target >= 0.0 && c_target <= 1.0)) {
        throw DomainError("calibrate_copula: target must lie in [0, 1]");
    }
    if (c_target == 0.0 || c_target == 1.0) return c_target;
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (copula_power_correlation(mid, m) < c_target) lo = mid;
        else hi = mid;
    }
    const double r = 0.5 * (lo + hi);
    if (std::abs(copula_power_correlation(r, m) - c_target) > 1e-4) {
        throw ConvergenceError("calibrate_copula: bisection missed the target correlation");
    }
    return r;
}

CorrelatedNakagamiSampler::CorrelatedNakagamiSampler(const channel::RisGeometry& geom, double rho, double m)
    : m_(m) {
    if (!(m >= 0.5) || !std::isfinite(m)) throw ConfigError("Nakagami shape must be >= 0.5");
    const Eigen::MatrixXd C = channel::correlation_matrix(geom, rho).entries;
    const Eigen::Index M = C.rows();
    elements_ = static_cast<int>(M);

    gaussian_components_ = static_cast<int>(std::floor(2.0 * m + 1e-12));
    const double frac = 2.0 * m - gaussian_components_;
    fractional_shape_ = frac > 1e-12 ? 0.5 * frac : 0.0;
    independent_ = rho == 0.0;
    if (independent_) return;

    gauss_factor_ = psd_factor(C.cwiseSqrt());

    if (fractional_shape_ > 0.0) {
        std::map<double, double> latent_of;
        Eigen::MatrixXd L(M, M);
        for (Eigen::Index i = 0; i < M; ++i) {
            L(i, i) = 1.0;
            for (Eigen::Index j = i + 1; j < M; ++j) {
                const double c = C(i, j);
                auto it = latent_of.find(c);
                if (it == latent_of.end()) it = latent_of.emplace(c, calibrate_copula(c, fractional_shape_)).first;
                L(i, j) = L(j, i) = it->second;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
        Eigen::MatrixXd repaired = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                                   es.eigenvectors().transpose();
        const Eigen::VectorXd d = repaired.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
        repaired = d.asDiagonal() * repaired * d.asDiagonal();
        const double change = (repaired - L).norm();
        if (change > kPsdRepairLimit) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "latent copula matrix needs PSD repair of %.3g (limit %.0e)", change,
                          kPsdRepairLimit);
            throw ConfigError(buf);
        }
        copula_factor_ = psd_factor(repaired);
    }
}

void CorrelatedNakagamiSampler::sample(rng::Stream& stream, Eigen::Ref<Eigen::VectorXd> out) const {
    const Eigen::Index M = elements_;
    if (out.size() != M) throw DomainError("CorrelatedNakagamiSampler: output size mismatch");
    Eigen::VectorXd xi(M);
    Eigen::VectorXd x(M);
    out.setZero();
    const auto draw = [&]() {
        for (Eigen::Index i = 0; i < M; ++i) xi(i) = stream.normal();
    };
    for (int k = 0; k < gaussian_components_; ++k) {
        draw();
        if (independent_) x = xi;
        else x.noalias() = gauss_factor_ * xi;
        out += x.cwiseAbs2();
    }
    if (fractional_shape_ > 0.0) {
        draw();
        if (independent_) x = xi;
        else x.noalias() = copula_factor_ * xi;
        for (Eigen::Index i = 0; i < M; ++i) out(i) += 2.0 * gamma_quantile_of_normal(fractional_shape_, x(i));
    }
    out = (out / (2.0 * m_)).cwiseSqrt();
}

Eigen::VectorXd sample_correlated_nakagami(const channel::RisGeometry& geom, double rho, double m,
                                           rng::Stream& stream) {
    const CorrelatedNakagamiSampler sampler(geom, rho, m);
    Eigen::VectorXd out(geom.elements());
    sampler.sample(stream, out);
    return out;
}

void SimConfig::validate() const {
    geometry.validate();
    fading.validate();
    interference.validate();
    if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("rho must lie in [0, 1]");
    if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("p must be finite and > 0");
    if (frames < 1) throw ConfigError("frames must be >= 1");
}

LinkSimulator::LinkSimulator(SimConfig config)
    : config_((config.validate(), std::move(config))),
      h0_(config_.geometry, config_.rho, config_.fading.m_h_shape),
      g0_(config_.geometry, config_.rho, config_.fading.m_g_shape) {
    std::map<std::pair<int, double>, std::shared_ptr<const CorrelatedNakagamiSampler>> pool;
    const double rho_i = config_.interferer_correlated ? config_.rho : 0.0;
    const auto get = [&](int elements, double m) {
        auto& slot = pool[{elements, m}];
        if (!slot) {
            slot = std::make_shared<const CorrelatedNakagamiSampler>(channel::RisGeometry::near_square(elements),
                                                                     rho_i, m);
        }
        return slot;
    };
    for (const perf::Interferer& it : config_.interference.interferers) {
        InterfererChannel ch;
        ch.h = get(it.m_elements, config_.fading.m_h_shape);
        ch.g = get(it.m_elements, config_.fading.m_g_shape);
        if (config_.interference.mode == perf::IoiMode::SubFrame) {
            const int c = *it.subframe_factor;
            ch.configurations = c - 1;
            ch.amplitude = std::sqrt(1.0 / c);
        }
        interferers_.push_back(ch);
    }
}

FrameSample LinkSimulator::simulate_frame(std::uint64_t frame) const {
    const std::uint64_t seed = config_.seed;
    const int M0 = h0_.size();
    Eigen::VectorXd h(M0);
    Eigen::VectorXd g(M0);
    {
        rng::Stream sh(seed, frame, substream::h0);
        h0_.sample(sh, h);
        rng::Stream sg(seed, frame, substream::g0);
        g0_.sample(sg, g);
    }
    std::complex<double> z;
    if (const auto* vm = std::get_if<channel::VonMises>(&config_.fading.phase_error)) {
        rng::Stream sp(seed, frame, substream::phase_error);
        for (int i = 0; i < M0; ++i) z += h(i) * g(i) * std::polar(1.0, sample_von_mises(vm->kappa, sp));
    } else {
        z = h.dot(g);
    }

    std::complex<double> y;
    const bool uniform_fraction = config_.interference.mode == perf::IoiMode::UniformFraction;
    for (std::size_t i = 0; i < interferers_.size(); ++i) {
        const InterfererChannel& ch = interferers_[i];
        const int Mi = ch.h->size();
        Eigen::VectorXd hi(Mi);
        Eigen::VectorXd gi(Mi);
        rng::Stream sh(seed, frame, substream::interferer(i, 0));
        ch.h->sample(sh, hi);
        rng::Stream sg(seed, frame, substream::interferer(i, 1));
        ch.g->sample(sg, gi);
        rng::Stream sp(seed, frame, substream::interferer(i, 2));
        for (int l = 0; l < ch.configurations; ++l) {
            std::complex<double> j;
            for (int k = 0; k < Mi; ++k) j += hi(k) * gi(k) * std::polar(1.0, sp.uniform_angle());
            if (uniform_fraction) {
                rng::Stream aux(seed, frame, substream::interferer(i, 3));
                const double q = aux.uniform();
                y += std::sqrt(q) * j * std::polar(1.0, aux.uniform_angle());
            } else {
                y += ch.amplitude * j;
            }
        }
    }

    FrameSample s;
    s.aligned_gain = std::abs(z);
    s.theta = std::arg(z);
    s.interference = y;
    s.snr = config_.p * std::norm(z + y);
    return s;
}

namespace {

struct ChunkStats {
    std::int64_t n = 0;
    double sum = 0.0;
    double comp = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
};

int resolve_workers(int requested, std::int64_t chunks) {
    int w = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    w = std::max(w, 1);
    return static_cast<int>(std::min<std::int64_t>(w, std::max<std::int64_t>(chunks, 1)));
}

// Runs body(chunk_index) for every chunk on a small thread pool; the first
// exception stops the remaining work and is rethrown.
void for_each_chunk(std::int64_t chunks, int workers, const std::function<void(std::int64_t)>& body) {
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto run = [&] {
        for (;;) {
            if (failed.load()) return;
            const std::int64_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                body(c);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
                return;
            }
        }
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace

EstimatorResult estimate_mean(std::int64_t n, const std::function<double(std::int64_t)>& sample,
                              const EstimateOptions& options) {
    if (n < 1) throw ConfigError("estimate_mean: sample count must be >= 1");
    const std::int64_t chunk = std::max<std::int64_t>(options.chunk, 1);
    const std::int64_t chunks = (n + chunk - 1) / chunk;
    std::vector<ChunkStats> stats(static_cast<std::size_t>(chunks));
    for_each_chunk(chunks, resolve_workers(options.workers, chunks), [&](std::int64_t c) {
        ChunkStats s;
        const std::int64_t end = std::min(n, (c + 1) * chunk);
        for (std::int64_t i = c * chunk; i < end; ++i) {
            const double v = sample(i);
            const double t = s.sum + v;
            s.comp += std::abs(s.sum) >= std::abs(v) ? (s.sum - t) + v : (v - t) + s.sum;
            s.sum = t;
            ++s.n;
            const double delta = v - s.mean;
            s.mean += delta / static_cast<double>(s.n);
            s.m2 += delta * (v - s.mean);
        }
        stats[static_cast<std::size_t>(c)] = s;
    });

    double sum = 0.0;
    double comp = 0.0;
    const auto add = [&](double v) {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    };
    ChunkStats total;
    for (const ChunkStats& s : stats) {
        add(s.sum);
        add(s.comp);
        if (total.n == 0) {
            total = s;
            continue;
        }
        const double na = static_cast<double>(total.n);
        const double nb = static_cast<double>(s.n);
        const double delta = s.mean - total.mean;
        total.m2 += s.m2 + delta * delta * na * nb / (na + nb);
        total.mean += delta * nb / (na + nb);
        total.n += s.n;
    }
    EstimatorResult r;
    r.n = n;
    r.mean = (sum + comp) / static_cast<double>(n);
    r.std_error = n > 1 ? std::sqrt(total.m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    return r;
}

EstimatorResult estimate_statistic(const LinkSimulator& sim,
                                   const std::function<double(const FrameSample&)>& statistic,
                                   const EstimateOptions& options) {
    return estimate_mean(
        sim.config().frames,
        [&](std::int64_t f) { return statistic(sim.simulate_frame(static_cast<std::uint64_t>(f))); }, options);
}

EstimatorResult estimate_spectral_efficiency(const SimConfig& config, const EstimateOptions& options) {
    const LinkSimulator sim(config);
    return estimate_statistic(sim, [](const FrameSample& s) { return std::log2(1.0 + s.snr); }, options);
}

EstimatorResult estimate_paired_difference(const SimConfig& a, const SimConfig& b,
                                           const EstimateOptions& options) {
    SimConfig b_same = b;
    b_same.seed = a.seed;
    const LinkSimulator sa(a);
    const LinkSimulator sb(b_same);
    return estimate_mean(
        a.frames,
        [&](std::int64_t f) {
            const auto frame = static_cast<std::uint64_t>(f);
            return std::log2(1.0 + sa.simulate_frame(frame).snr) - std::log2(1.0 + sb.simulate_frame(frame).snr);
        },
        options);
}

std::vector<double> simulate_snr(const SimConfig& config, const EstimateOptions& options) {
    const LinkSimulator sim(config);
    const std::int64_t n = config.frames;
    const std::int64_t chunk = std::max<std::int64_t>(options.chunk, 1);
    const std::int64_t chunks = (n + chunk - 1) / chunk;
    std::vector<double> out(static_cast<std::size_t>(n));
    for_each_chunk(chunks, resolve_workers(options.workers, chunks), [&](std::int64_t c) {
        const std::int64_t end = std::min(n, (c + 1) * chunk);
        for (std::int64_t f = c * chunk; f < end; ++f) {
            out[static_cast<std::size_t>(f)] = sim.simulate_frame(static_cast<std::uint64_t>(f)).snr;
        }
    });
    return out;
}

std::vector<double> empirical_cdf(const SimConfig& config, std::span<const double> grid,
                                  const EstimateOptions& options) {
    std::vector<double> snr = simulate_snr(config, options);
    std::sort(snr.begin(), snr.end());
    std::vector<double> out;
    out.reserve(grid.size());
    for (double g : grid) {
        const auto count = std::upper_bound(snr.begin(), snr.end(), g) - snr.begin();
        out.push_back(static_cast<double>(count) / static_cast<double>(snr.size()));
    }
    return out;
}

}  // namespace moris::mcsim
