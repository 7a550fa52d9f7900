#include "atclocks/clock_model.hpp"

#include <cmath>
#include <stdexcept>

namespace atclocks {

JumpDistribution::JumpDistribution(int cycle_length, Eigen::VectorXd probs)
    : d_(cycle_length), probs_(std::move(probs)), max_offset_(0)
{
    if (d_ < 1)
        throw std::invalid_argument("JumpDistribution: cycle length must be positive");
    if (probs_.size() != d_ + 1)
        throw std::invalid_argument("JumpDistribution: probs must have d + 1 entries");
    double sum = 0.0;
    for (int k = 0; k <= d_; ++k) {
        const double p = probs_[k];
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("JumpDistribution: probabilities must lie in [0, 1]");
        sum += p;
        if (p > 0.0)
            max_offset_ = k;
    }
    if (std::abs(sum - 1.0) > kNormalizationTolerance)
        throw std::invalid_argument("JumpDistribution: probabilities must sum to 1");
}

int JumpDistribution::sample_offset(double u) const
{
    double cumulative = 0.0;
    for (int k = 0; k <= d_; ++k) {
        cumulative += probs_[k];
        if (u < cumulative)
            return k;
    }
    return max_offset_; // u at or beyond the total mass (rounding)
}

Eigen::MatrixXd JumpDistribution::transition_matrix() const
{
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(d_, d_);
    for (int j = 0; j < d_; ++j)
        for (int k = 0; k <= d_; ++k)
            t(j, (j + k) % d_) += probs_[k];
    return t;
}

StochasticClock::StochasticClock()
    : jumps(1, (Eigen::VectorXd(2) << 0.0, 1.0).finished())
{
}

StochasticClock::StochasticClock(JumpDistribution j, int initial)
    : jumps(std::move(j)), initial_position(initial)
{
    if (initial_position < 0 || initial_position >= jumps.cycle_length())
        throw std::invalid_argument("StochasticClock: initial position out of range");
}

ClockRunState make_run_state(const StochasticClock& clock)
{
    ClockRunState state;
    state.position = clock.initial_position;
    return state;
}

bool step(const StochasticClock& clock, ClockRunState& state, double randomness,
          StepMode mode)
{
    const int d = clock.jumps.cycle_length();
    const int offset = clock.jumps.sample_offset(randomness);

    const std::int64_t old_total = state.progress + clock.initial_position;
    std::int64_t new_total = old_total + offset;
    const bool ticked = new_total / d > old_total / d;

    if (ticked && mode == StepMode::reset)
        new_total = (new_total / d) * d; // discard overshoot, restart from position 0

    state.progress = new_total - clock.initial_position;
    state.position = static_cast<int>(new_total % d);
    state.ticks_emitted = new_total / d;
    state.applications += 1;
    return ticked;
}

StochasticClock make_ladder(int d, double delta)
{
    if (d < 1)
        throw std::invalid_argument("make_ladder: d must be positive");
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::invalid_argument("make_ladder: delta must lie in [0, 1]");
    Eigen::VectorXd probs = Eigen::VectorXd::Zero(d + 1);
    probs[0] = 1.0 - delta;
    probs[1] = delta;
    return StochasticClock(JumpDistribution(d, std::move(probs)), 0);
}

StochasticClock make_perfect(int d)
{
    return make_ladder(d, 1.0);
}

double epsilon_continuity(const StochasticClock& clock)
{
    return 1.0 - clock.jumps.prob(0);
}

double expected_jumps_per_tick_exact(const StochasticClock& clock)
{
    const int d = clock.jumps.cycle_length();
    const Eigen::VectorXd& p = clock.jumps.probs();
    if (p[0] == 1.0)
        return kInfiniteExpectation;

    // E_j = 1 + sum_k p[k] E_{j+k}, with E = 0 once j + k >= d.
    // Back-substitution from j = d-1 down: E_j (1 - p[0]) = 1 + sum_{k>=1} ...
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(d);
    for (int j = d - 1; j >= 0; --j) {
        double rhs = 1.0;
        for (int k = 1; k <= d && j + k < d; ++k)
            rhs += p[k] * expected[j + k];
        expected[j] = rhs / (1.0 - p[0]);
    }
    return expected[0];
}

} // namespace atclocks
