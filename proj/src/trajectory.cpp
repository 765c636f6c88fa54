//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include "reachcert/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "reachcert/error.hpp"
#include "reachcert/parallel.hpp"

namespace reachcert {

namespace {

bool escaped(const Vector& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(std::abs(x(i)) <= kOverflowGuard)) return true;
    }
    return false;
}

/// Allocation-free strict membership test, matching contains().
class BallTest {
  public:
    explicit BallTest(const TargetBall& ball) : ball_(ball), diff_(ball.dim()), tmp_(ball.dim()) {}

    bool operator()(const Vector& x) {
        diff_ = x - ball_.center;
        if (!ball_.weight) return diff_.norm() < ball_.radius;
        tmp_.noalias() = *ball_.weight * diff_;
        return std::sqrt(std::max(diff_.dot(tmp_), 0.0)) < ball_.radius;
    }

  private:
    const TargetBall& ball_;
    Vector diff_, tmp_;
};

/// Steps one trajectory in place; the linear case avoids variant dispatch.
class Stepper {
  public:
    Stepper(const System& system, TrajectorySeed seed)
        : system_(system),
          linear_(std::get_if<LinearSystem>(&system)),
          noise_(noise_of(system)),
          rng_(seed),
          w_(noise_.dim()),
          next_(state_dim(system)) {}

    void advance(Vector& x) {
        noise_.draw(rng_, w_);
        if (linear_) {
            next_.noalias() = linear_->a * x;
            next_.noalias() += linear_->b * w_;
        } else {
            step_into(system_, x, w_, next_);
        }
        x.swap(next_);
    }

  private:
    const System& system_;
    const LinearSystem* linear_;
    const NoiseModel& noise_;
    RandomStream rng_;
    Vector w_, next_;
};

void check_start(const System& system, const Vector& x0) {
    require(x0.size() == state_dim(system), ErrorCode::DimensionMismatch,
            "initial state dimension differs from the system");
    require(x0.allFinite(), ErrorCode::NonFinite, "initial state is not finite");
}

}  // namespace

Trajectory simulate(const System& system, const Vector& x0, long long horizon,
                    TrajectorySeed seed) {
    require(horizon >= 0, ErrorCode::InvalidArgument, "simulate: horizon must be >= 0");
    check_start(system, x0);
    Trajectory out;
    out.states.reserve(static_cast<std::size_t>(std::min<long long>(horizon, 1 << 20)) + 1);
    out.states.push_back(x0);
    Stepper stepper(system, seed);
    Vector x = x0;
    for (long long k = 1; k <= horizon; ++k) {
        stepper.advance(x);
        if (escaped(x)) {
            out.overflow = true;
            break;
        }
        out.states.push_back(x);
    }
    return out;
}

namespace {

template <class MakeTest>
EnsembleStats run_ensemble(const System& system, MakeTest make_test, const Vector& x0,
                           long long n_traj, long long horizon, std::uint64_t base_seed,
                           const EnsembleOptions& options) {
    require(n_traj >= 1, ErrorCode::InvalidArgument, "hitting_stats: need at least one trajectory");
    require(horizon >= 0, ErrorCode::InvalidArgument, "hitting_stats: horizon must be >= 0");
    check_start(system, x0);

    EnsembleStats st;
    st.trajectories = n_traj;
    st.horizon = horizon;
    st.seed = base_seed;
    st.divergence_threshold = options.divergence_threshold.value_or(1e6 * (1.0 + x0.norm()));
    st.occupancy_steps = options.occupancy_steps;
    std::sort(st.occupancy_steps.begin(), st.occupancy_steps.end());
    const std::size_t n_occ = options.occupancy_ball ? st.occupancy_steps.size() : 0;

    const auto count = static_cast<std::size_t>(n_traj);
    std::vector<long long> hit_time(count, -1);
    std::vector<char> divergent(count, 0), overflow(count, 0);
    std::vector<char> occupied(count * n_occ, 0);

    parallel_for(count, [&](std::size_t i) {
        Stepper stepper(system, {base_seed, i});
        auto in_target = make_test();
        std::optional<BallTest> in_occ;
        if (n_occ) in_occ.emplace(*options.occupancy_ball);
        Vector x = x0;
        std::size_t occ_at = 0;
        auto record_occupancy = [&](long long k) {
            while (occ_at < n_occ && st.occupancy_steps[occ_at] < k) ++occ_at;
            while (occ_at < n_occ && st.occupancy_steps[occ_at] == k) {
                occupied[i * n_occ + occ_at] = (*in_occ)(x) ? 1 : 0;
                ++occ_at;
            }
        };
        if (in_target(x)) hit_time[i] = 0;
        if (n_occ) record_occupancy(0);
        for (long long k = 1; k <= horizon; ++k) {
            stepper.advance(x);
            if (escaped(x)) {
                overflow[i] = 1;
                break;
            }
            if (hit_time[i] < 0 && in_target(x)) hit_time[i] = k;
            if (n_occ) record_occupancy(k);
        }
        divergent[i] = overflow[i] || x.norm() > st.divergence_threshold;
    });

    std::vector<long long> times;
    for (std::size_t i = 0; i < count; ++i) {
        if (hit_time[i] >= 0) times.push_back(hit_time[i]);
        st.divergent += divergent[i];
        st.overflowed += overflow[i];
    }
    std::sort(times.begin(), times.end());
    st.hits = static_cast<long long>(times.size());
    st.hit_fraction = static_cast<double>(st.hits) / static_cast<double>(n_traj);
    st.divergence_fraction = static_cast<double>(st.divergent) / static_cast<double>(n_traj);
    for (double q : {0.5, 0.9, 0.99}) {
        HittingQuantile hq{q, std::nullopt};
        const auto rank = static_cast<long long>(std::ceil(q * static_cast<double>(n_traj)));
        if (st.hits >= rank && rank >= 1) hq.steps = times[static_cast<std::size_t>(rank - 1)];
        st.quantiles.push_back(hq);
    }
    st.occupancy_counts.assign(n_occ, 0);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < n_occ; ++j) st.occupancy_counts[j] += occupied[i * n_occ + j];
    if (!n_occ) st.occupancy_steps.clear();
    return st;
}

}  // namespace

EnsembleStats hitting_stats(const System& system, const TargetBall& target, const Vector& x0,
                            long long n_traj, long long horizon, std::uint64_t base_seed,
                            const EnsembleOptions& options) {
    require(target.dim() == x0.size(), ErrorCode::DimensionMismatch,
            "hitting_stats: target dimension mismatch");
    return run_ensemble(
        system, [&target] { return BallTest(target); }, x0, n_traj, horizon, base_seed, options);
}

EnsembleStats hitting_stats(const System& system, const Region& target, const Vector& x0,
                            long long n_traj, long long horizon, std::uint64_t base_seed,
                            const EnsembleOptions& options) {
    require(static_cast<bool>(target.contains), ErrorCode::InvalidArgument,
            "hitting_stats: target region missing");
    return run_ensemble(
        system, [&target] { return [&target](const Vector& x) { return target.contains(x); }; },
        x0, n_traj, horizon, base_seed, options);
}

std::vector<long long> log2_grid(int lo, int hi) {
    require(lo >= 0 && hi >= lo && hi < 62, ErrorCode::InvalidArgument, "log2_grid: bad range");
    std::vector<long long> g;
    for (int e = lo; e <= hi; ++e) g.push_back(1LL << e);
    return g;
}

DecayFit decay_exponent(const System& system, const TargetBall& ball,
                        const std::vector<long long>& k_grid, long long n_traj,
                        std::uint64_t base_seed) {
    require(!k_grid.empty(), ErrorCode::InvalidArgument, "decay_exponent: empty k grid");
    require(std::all_of(k_grid.begin(), k_grid.end(), [](long long k) { return k >= 1; }),
            ErrorCode::InvalidArgument, "decay_exponent: grid steps must be >= 1");
    const int n = state_dim(system);
    EnsembleOptions opts;
    opts.occupancy_steps = k_grid;
    opts.occupancy_ball = ball;
    // Only occupancy is used; the ball doubles as the (ignored) hitting target.
    const long long horizon = *std::max_element(k_grid.begin(), k_grid.end());
    const auto st = hitting_stats(system, ball, Vector::Zero(n), n_traj, horizon, base_seed, opts);

    DecayFit fit;
    fit.k_grid = st.occupancy_steps;
    fit.counts = st.occupancy_counts;
    fit.trajectories = n_traj;
    double sw = 0.0, sx = 0.0, sy = 0.0;
    std::vector<double> lx, ly, w;
    for (std::size_t j = 0; j < fit.k_grid.size(); ++j) {
        const double p = static_cast<double>(fit.counts[j]) / static_cast<double>(n_traj);
        fit.p_hat.push_back(p);
        if (fit.counts[j] == 0) continue;
        lx.push_back(std::log(static_cast<double>(fit.k_grid[j])));
        ly.push_back(std::log(p));
        w.push_back(static_cast<double>(fit.counts[j]));
    }
    fit.usable_points = static_cast<int>(lx.size());
    if (fit.usable_points < 4) {
        fail(ErrorCode::InsufficientData,
             "decay_exponent: fewer than 4 grid points with non-zero occupancy");
    }
    for (std::size_t j = 0; j < lx.size(); ++j) {
        sw += w[j];
        sx += w[j] * lx[j];
        sy += w[j] * ly[j];
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t j = 0; j < lx.size(); ++j) {
        sxx += w[j] * (lx[j] - mx) * (lx[j] - mx);
        sxy += w[j] * (lx[j] - mx) * (ly[j] - my);
    }
    require(sxx > 0.0, ErrorCode::InsufficientData, "decay_exponent: degenerate k grid");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t j = 0; j < lx.size(); ++j) {
        const double r = ly[j] - fit.intercept - fit.slope * lx[j];
        rss += w[j] * r * r;
    }
    fit.slope_stderr = std::sqrt(rss / static_cast<double>(lx.size() - 2) / sxx);
    return fit;
}

MomentStats ensemble_moments(const System& system, const Vector& x0,
                             const std::vector<long long>& steps, long long n_traj,
                             std::uint64_t base_seed) {
    require(n_traj >= 2, ErrorCode::InvalidArgument, "ensemble_moments: need two trajectories");
    check_start(system, x0);
    MomentStats out;
    out.steps = steps;
    std::sort(out.steps.begin(), out.steps.end());
    require(out.steps.empty() || out.steps.front() >= 0, ErrorCode::InvalidArgument,
            "ensemble_moments: steps must be >= 0");
    out.trajectories = n_traj;
    const int n = state_dim(system);
    const std::size_t ns = out.steps.size();
    const long long horizon = ns ? out.steps.back() : 0;
    std::vector<Vector> snap(static_cast<std::size_t>(n_traj) * ns);
    parallel_for(static_cast<std::size_t>(n_traj), [&](std::size_t i) {
        Stepper stepper(system, {base_seed, i});
        Vector x = x0;
        std::size_t at = 0;
        for (long long k = 0; k <= horizon && at < ns; ++k) {
            if (k > 0) stepper.advance(x);
            while (at < ns && out.steps[at] == k) snap[i * ns + at++] = x;
        }
    });
    for (std::size_t j = 0; j < ns; ++j) {
        Vector mean = Vector::Zero(n);
        for (long long i = 0; i < n_traj; ++i) mean += snap[static_cast<std::size_t>(i) * ns + j];
        mean /= static_cast<double>(n_traj);
        Matrix cov = Matrix::Zero(n, n);
        for (long long i = 0; i < n_traj; ++i) {
            const Vector d = snap[static_cast<std::size_t>(i) * ns + j] - mean;
            cov += d * d.transpose();
        }
        cov /= static_cast<double>(n_traj - 1);
        out.mean.push_back(mean);
        out.covariance.push_back(cov);
    }
    return out;
}

}  // namespace reachcert
