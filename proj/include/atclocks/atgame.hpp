#ifndef ATCLOCKS_ATGAME_HPP
#define ATCLOCKS_ATGAME_HPP

#include "atclocks/clock_model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace atclocks {

enum class Player { A, B };

struct GameConfig {
    StochasticClock clock_a;
    StochasticClock clock_b;
    std::int64_t initial_offset = 0;   // z0 = P_A^0 - P_B^0, |z0| < d
    std::int64_t application_cap = 10'000'000;
    std::uint64_t seed = 0;
    std::int64_t runs = 1;

    void validate() const;
};

struct TickRecord {
    Player owner;
    std::int64_t application_index;
};

enum class HaltReason { violation, cap_reached };

// Full record of one Alternate Ticks Game run.
struct GameTranscript {
    std::vector<TickRecord> ticks;       // valid alternating prefix, then possibly one violating tick
    std::int64_t score = 0;              // min ticks per side over the valid prefix
    HaltReason halt_reason = HaltReason::cap_reached;
    std::int64_t applications_used = 0;
    std::int64_t simultaneous_ticks = 0; // rounds in which both clocks ticked

    // Q-walk trace (walk units: lead of the initially-ahead player).
    std::int64_t q_initial = 0;
    std::int64_t q_min = 0;
    std::int64_t q_max = 0;
    std::int64_t q_at_halt = 0;
    // True if some round ended beyond the sufficient boundary while the game
    // was still alive (would falsify Lemma-3 sufficiency).
    bool survived_past_sufficient = false;
};

struct ScoreEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t runs = 0;
    std::int64_t capped_runs = 0;
};

// Plays one game in lockstep rounds. Deterministic in (config.seed, run_index).
GameTranscript play_once(const GameConfig& config, std::int64_t run_index);

// Monte Carlo mean and standard error of the score over config.runs games.
ScoreEstimate estimate_score(const GameConfig& config);

struct BoundaryReport {
    bool necessary_at_halt = true;  // halt by violation implies Q > d or Q < 0
    bool sufficient_respected = true; // never alive past Q > 2d or Q < -d
    bool touched_necessary = false;
    bool touched_sufficient = false;
    std::string detail;

    bool ok() const { return necessary_at_halt && sufficient_respected; }
};

// Falsification harness for the halting boundaries.
BoundaryReport check_halting_boundaries(const GameTranscript& transcript, int d);

} // namespace atclocks

#endif
