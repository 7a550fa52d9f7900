#include "atclocks/atgame.hpp"

#include "atclocks/random.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace atclocks {

void GameConfig::validate() const
{
    const int d = clock_a.jumps.cycle_length();
    if (clock_b.jumps.cycle_length() != d)
        throw std::invalid_argument("GameConfig: clocks must share the cycle length");
    if (initial_offset <= -d || initial_offset >= d)
        throw std::invalid_argument("GameConfig: |z0| must be smaller than d");
    if (application_cap < 1)
        throw std::invalid_argument("GameConfig: application cap must be positive");
    if (runs < 1)
        throw std::invalid_argument("GameConfig: runs must be positive");
}

namespace {

// Initial positions realizing the configured offset: j_A = 0, j_B = z0 mod d.
// The Q-walk tracks the lead of the initially-ahead player (B), so it starts
// in [0, d) as the halting lemma assumes.
int initial_position_b(const GameConfig& config)
{
    const int d = config.clock_a.jumps.cycle_length();
    return static_cast<int>(((config.initial_offset % d) + d) % d);
}

} // namespace

GameTranscript play_once(const GameConfig& config, std::int64_t run_index)
{
    config.validate();

    const int d = config.clock_a.jumps.cycle_length();
    const StochasticClock clock_a(config.clock_a.jumps, 0);
    const StochasticClock clock_b(config.clock_b.jumps, initial_position_b(config));

    ClockRunState state_a = make_run_state(clock_a);
    ClockRunState state_b = make_run_state(clock_b);
    RandomStream rng(config.seed, static_cast<std::uint64_t>(run_index));

    GameTranscript t;
    t.q_initial = clock_b.initial_position;
    t.q_min = t.q_max = t.q_at_halt = t.q_initial;

    std::int64_t ticks_a = 0;
    std::int64_t ticks_b = 0;
    // The alternation phase is fixed up front: the initially-ahead player (B
    // in these coordinates) must produce the first tick. This is what makes
    // the halting boundaries on Q valid; with a free phase a violation can
    // occur while Q is still inside [0, d].
    Player expected = Player::B;

    const auto q_value = [&]() {
        return (state_b.progress + clock_b.initial_position)
             - (state_a.progress + clock_a.initial_position);
    };

    for (std::int64_t round = 1; round <= config.application_cap; ++round) {
        const bool tick_a = step(clock_a, state_a, rng.next_uniform());
        const bool tick_b = step(clock_b, state_b, rng.next_uniform());

        Player order[2];
        int n_events = 0;
        if (tick_a && tick_b) {
            ++t.simultaneous_ticks;
            // The expected owner is consumed first.
            if (expected == Player::B) {
                order[0] = Player::B;
                order[1] = Player::A;
            } else {
                order[0] = Player::A;
                order[1] = Player::B;
            }
            n_events = 2;
        } else if (tick_a) {
            order[0] = Player::A;
            n_events = 1;
        } else if (tick_b) {
            order[0] = Player::B;
            n_events = 1;
        }

        bool violated = false;
        for (int e = 0; e < n_events && !violated; ++e) {
            const Player owner = order[e];
            t.ticks.push_back({owner, round});
            if (owner == expected) {
                expected = owner == Player::A ? Player::B : Player::A;
                (owner == Player::A ? ticks_a : ticks_b) += 1;
            } else {
                violated = true; // the violating tick is recorded but not scored
            }
        }

        const std::int64_t q = q_value();
        t.q_min = std::min(t.q_min, q);
        t.q_max = std::max(t.q_max, q);
        t.applications_used = round;

        if (violated) {
            t.halt_reason = HaltReason::violation;
            t.q_at_halt = q;
            t.score = std::min(ticks_a, ticks_b);
            return t;
        }
        if (q > 2 * d || q < -d)
            t.survived_past_sufficient = true;
    }

    t.halt_reason = HaltReason::cap_reached;
    t.q_at_halt = q_value();
    t.score = std::min(ticks_a, ticks_b);
    return t;
}

ScoreEstimate estimate_score(const GameConfig& config)
{
    config.validate();
    if (config.runs < 2)
        throw std::invalid_argument("estimate_score: at least 2 runs required");

    ScoreEstimate est;
    est.runs = config.runs;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::int64_t i = 0; i < config.runs; ++i) {
        const GameTranscript t = play_once(config, i);
        const double s = static_cast<double>(t.score);
        sum += s;
        sum_sq += s * s;
        if (t.halt_reason == HaltReason::cap_reached)
            ++est.capped_runs;
    }
    const double n = static_cast<double>(config.runs);
    est.mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
    return est;
}

BoundaryReport check_halting_boundaries(const GameTranscript& transcript, int d)
{
    BoundaryReport report;
    report.touched_necessary = transcript.q_max > d || transcript.q_min < 0;
    report.touched_sufficient = transcript.q_max > 2 * d || transcript.q_min < -d;

    if (transcript.halt_reason == HaltReason::violation) {
        const std::int64_t q = transcript.q_at_halt;
        if (!(q > d || q < 0)) {
            report.necessary_at_halt = false;
            std::ostringstream os;
            os << "violation halt with Q = " << q << " inside [0, " << d << "]";
            report.detail = os.str();
        }
    }
    if (transcript.survived_past_sufficient) {
        report.sufficient_respected = false;
        if (!report.detail.empty())
            report.detail += "; ";
        report.detail += "game continued past the sufficient boundary";
    }
    return report;
}

} // namespace atclocks
