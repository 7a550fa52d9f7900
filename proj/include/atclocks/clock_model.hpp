#ifndef ATCLOCKS_CLOCK_MODEL_HPP
#define ATCLOCKS_CLOCK_MODEL_HPP

#include <Eigen/Core>

#include <cstdint>
#include <limits>

namespace atclocks {

// Probability distribution over forward jump offsets of a homogeneous clock.
// Positions live on a cycle of length d; offsets range over {0, ..., d}.
class JumpDistribution {
public:
    // probs must have size d + 1, entries in [0, 1] summing to 1 within 1e-12.
    JumpDistribution(int cycle_length, Eigen::VectorXd probs);

    int cycle_length() const { return d_; }
    const Eigen::VectorXd& probs() const { return probs_; }
    double prob(int offset) const { return probs_[offset]; }

    // Largest offset with positive mass; 0 for the identity clock.
    int max_offset() const { return max_offset_; }

    // Inverse-CDF sampling: cumulative sums in ascending offset order,
    // half-open intervals. Deterministic in u.
    int sample_offset(double u) const;

    // One-application transition matrix on positions {0, ..., d-1}
    // (cycle-d runtime convention; row-stochastic).
    Eigen::MatrixXd transition_matrix() const;

    bool operator==(const JumpDistribution& other) const
    {
        return d_ == other.d_ && probs_ == other.probs_;
    }

    static constexpr double kNormalizationTolerance = 1e-12;

private:
    int d_;
    Eigen::VectorXd probs_;
    int max_offset_;
};

// Classical stochastic reset clock: jump distribution plus a deterministic
// initial position on the cycle.
struct StochasticClock {
    JumpDistribution jumps;
    int initial_position = 0;

    // Trivial d = 1 perfect clock, so that configuration structs holding
    // clocks stay default-constructible; still a fully valid clock.
    StochasticClock();
    StochasticClock(JumpDistribution j, int initial = 0);
};

// Mutable state of one simulation run of a clock.
struct ClockRunState {
    int position = 0;                 // current circle position, (initial + progress) mod d
    std::int64_t progress = 0;        // cumulative forward positions incl. snapping corrections
    std::int64_t ticks_emitted = 0;   // = floor((progress + initial_position) / d)
    std::int64_t applications = 0;    // map applications so far
};

ClockRunState make_run_state(const StochasticClock& clock);

// Reset: overshoot past the tick multiple is discarded, the clock restarts
// from position 0. Modular: progress accumulates without snapping (the
// Q-walk picture). The two coincide whenever max_offset <= 1.
enum class StepMode { reset, modular };

// Applies the clock map once, drawing the jump offset from `randomness`.
// Returns true iff a tick was emitted this application.
bool step(const StochasticClock& clock, ClockRunState& state, double randomness,
          StepMode mode = StepMode::reset);

// Ladder clock: jump +1 with probability delta, stay otherwise.
StochasticClock make_ladder(int d, double delta);

// Perfect clock: delta = 1 ladder, ticks every d applications exactly.
StochasticClock make_perfect(int d);

// Distance of the single-application channel from identity: 1 - p[0].
double epsilon_continuity(const StochasticClock& clock);

// E(Y), expected applications between consecutive ticks, via the
// first-passage linear system over positions {0, ..., d-1}. Infinity iff
// the clock is the identity.
double expected_jumps_per_tick_exact(const StochasticClock& clock);

constexpr double kInfiniteExpectation = std::numeric_limits<double>::infinity();

} // namespace atclocks

#endif
