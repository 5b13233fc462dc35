#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <vector>

namespace hardedge {

// Dormand-Prince 8(5,3) with 7th-order dense output, complex state.
class Dop853 {
public:
    using State = Eigen::VectorXcd;
    using Rhs = std::function<void(double t, const State& y, State& dydt)>;
    // Called after every accepted step; returning false stops the integration.
    using Observer = std::function<bool(double t, const State& y)>;

    struct Options {
        double rtol = 1e-10;
        double atol = 1e-13;
        double h_initial = 0.0;  // 0: estimated
        double h_max = std::numeric_limits<double>::infinity();
        long max_steps = 200000;
    };

    struct Stats {
        long accepted = 0;
        long rejected = 0;
        long evaluations = 0;
    };

    Dop853(Rhs rhs, Options options);

    // States at the increasing abscissas `outputs` (all >= t0), by dense output.
    std::vector<State> solve(double t0, const State& y0, const std::vector<double>& outputs,
                             const Observer& observer = {});

    const Stats& stats() const { return stats_; }
    // True when the last solve was stopped by the observer.
    bool interrupted() const { return interrupted_; }
    double last_time() const { return last_t_; }

private:
    Rhs rhs_;
    Options opt_;
    Stats stats_;
    bool interrupted_ = false;
    double last_t_ = 0.0;
};

}  // namespace hardedge
