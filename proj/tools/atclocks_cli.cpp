#include "atclocks/atgame.hpp"
#include "atclocks/clock_model.hpp"
#include "atclocks/quantum_verify.hpp"
#include "atclocks/walk_analysis.hpp"

#include <CLI11.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace atclocks;

constexpr int kExitBadArguments = 1;
constexpr int kExitVerificationFailure = 2;
constexpr int kExitIoFailure = 3;

struct Options {
    std::string d_range = "10";
    double delta = 0.05;
    long long runs = 500;
    std::uint64_t seed = 0;
    std::string z0 = "half";
    long long cap = 10'000'000;
    std::string out_path;
    std::string clock_spec = "ladder";
};

std::vector<int> parse_d_range(const std::string& text)
{
    std::vector<int> values;
    const auto first_colon = text.find(':');
    if (first_colon == std::string::npos) {
        values.push_back(std::stoi(text));
        return values;
    }
    const auto second_colon = text.find(':', first_colon + 1);
    if (second_colon == std::string::npos)
        throw CLI::ValidationError("--d", "expected <start:stop:step> or a single value");
    const int start = std::stoi(text.substr(0, first_colon));
    const int stop = std::stoi(text.substr(first_colon + 1, second_colon - first_colon - 1));
    const int step = std::stoi(text.substr(second_colon + 1));
    if (step <= 0 || stop < start)
        throw CLI::ValidationError("--d", "range must be non-empty with positive step");
    for (int d = start; d <= stop; d += step)
        values.push_back(d);
    return values;
}

long long resolve_z0(const std::string& text, int d)
{
    if (text == "half")
        return d / 2;
    return std::stoll(text);
}

StochasticClock build_clock(const std::string& spec, int d, double delta)
{
    if (spec == "ladder")
        return make_ladder(d, delta);
    if (spec == "perfect")
        return make_perfect(d);
    if (spec.rfind("custom:", 0) == 0) {
        std::vector<double> entries;
        std::stringstream ss(spec.substr(7));
        std::string token;
        double sum = 0.0;
        while (std::getline(ss, token, ','))
            sum += entries.emplace_back(std::stod(token));
        if (std::abs(sum - 1.0) > 1e-9)
            throw CLI::ValidationError("--clock", "custom offsets must sum to 1 within 1e-9");
        if (static_cast<int>(entries.size()) > d + 1)
            throw CLI::ValidationError("--clock", "more offsets than cycle positions");
        Eigen::VectorXd probs = Eigen::VectorXd::Zero(d + 1);
        for (std::size_t i = 0; i < entries.size(); ++i)
            probs[static_cast<int>(i)] = entries[i];
        probs[0] += 1.0 - sum; // absorb the <=1e-9 rounding so validation stays strict
        return StochasticClock(JumpDistribution(d, std::move(probs)), 0);
    }
    throw CLI::ValidationError("--clock", "expected ladder, perfect, or custom:<p0,p1,...>");
}

struct ResultRow {
    int d;
    double delta;
    double n_mean;
    double n_stderr;
    long long runs;
    long long capped_runs;
    double n_lower_headline;
    double n_upper_headline;
    double n_lower_exact;
    double n_upper_exact;
};

// 10 significant digits, the fixed CSV number format.
std::string fmt(double value)
{
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%.10g", value);
    return buffer;
}

int write_rows(const std::vector<ResultRow>& rows, const std::string& path)
{
    std::FILE* f = path.empty() ? stdout : std::fopen(path.c_str(), "wb");
    if (!f) {
        std::fprintf(stderr, "error: cannot open %s for writing\n", path.c_str());
        return kExitIoFailure;
    }
    std::fprintf(f, "d,delta,n_mean,n_stderr,runs,capped_runs,"
                    "n_lower_headline,n_upper_headline,n_lower_exact,n_upper_exact\n");
    for (const ResultRow& r : rows)
        std::fprintf(f, "%d,%s,%s,%s,%lld,%lld,%s,%s,%s,%s\n", r.d,
                     fmt(r.delta).c_str(), fmt(r.n_mean).c_str(),
                     fmt(r.n_stderr).c_str(), r.runs, r.capped_runs,
                     fmt(r.n_lower_headline).c_str(), fmt(r.n_upper_headline).c_str(),
                     fmt(r.n_lower_exact).c_str(), fmt(r.n_upper_exact).c_str());
    if (f != stdout)
        std::fclose(f);
    return 0;
}

int run_simulate(const Options& opt, bool fig1)
{
    const double delta = fig1 ? 0.05 : opt.delta;
    const long long runs = fig1 ? 500 : opt.runs;

    std::vector<ResultRow> rows;
    bool any_capped = false;
    for (const int d : parse_d_range(opt.d_range)) {
        GameConfig config{
            build_clock(fig1 ? "ladder" : opt.clock_spec, d, delta),
            build_clock(fig1 ? "ladder" : opt.clock_spec, d, delta),
            resolve_z0(fig1 ? "half" : opt.z0, d),
            opt.cap,
            opt.seed,
            runs,
        };
        const ScoreEstimate est = estimate_score(config);
        any_capped = any_capped || est.capped_runs > 0;

        ResultRow row{d, delta, est.mean, est.std_error, est.runs, est.capped_runs,
                      std::nan(""), std::nan(""), std::nan(""), std::nan("")};
        if (delta > 0.0 && delta < 1.0) {
            const Theorem2Report t2 = theorem2_bounds(d, delta);
            row.n_lower_headline = t2.headline.N_lower;
            row.n_upper_headline = t2.headline.N_upper;
            row.n_lower_exact = t2.appendix_exact.N_lower;
            row.n_upper_exact = t2.appendix_exact.N_upper;
        }
        rows.push_back(row);

        std::printf("d=%-5d n_mean=%-12s n_stderr=%-12s capped=%lld/%lld "
                    "exact=[%s, %s] headline=[%s, %s]\n",
                    d, fmt(row.n_mean).c_str(), fmt(row.n_stderr).c_str(),
                    row.capped_runs, row.runs, fmt(row.n_lower_exact).c_str(),
                    fmt(row.n_upper_exact).c_str(), fmt(row.n_lower_headline).c_str(),
                    fmt(row.n_upper_headline).c_str());
    }
    if (any_capped)
        std::printf("note: some runs hit the application cap; "
                    "their scores are included (mean is biased downward)\n");
    if (!opt.out_path.empty())
        return write_rows(rows, opt.out_path);
    return 0;
}

int run_bounds(const Options& opt)
{
    std::FILE* csv = nullptr;
    if (!opt.out_path.empty()) {
        csv = std::fopen(opt.out_path.c_str(), "wb");
        if (!csv) {
            std::fprintf(stderr, "error: cannot open %s for writing\n", opt.out_path.c_str());
            return kExitIoFailure;
        }
        std::fprintf(csv, "d,delta,variant,D_lower,D_upper,N_lower,N_upper\n");
    }
    const auto emit = [&](const BoundReport& r, double delta) {
        std::printf("%-24s d=%-5d D=[%s, %s] N=[%s, %s]  %s\n", to_string(r.variant),
                    r.d, fmt(r.D_lower).c_str(), fmt(r.D_upper).c_str(),
                    fmt(r.N_lower).c_str(), fmt(r.N_upper).c_str(), r.notes.c_str());
        if (csv)
            std::fprintf(csv, "%d,%s,%s,%s,%s,%s,%s\n", r.d, fmt(delta).c_str(),
                         to_string(r.variant), fmt(r.D_lower).c_str(),
                         fmt(r.D_upper).c_str(), fmt(r.N_lower).c_str(),
                         fmt(r.N_upper).c_str());
    };

    for (const int d : parse_d_range(opt.d_range)) {
        const StochasticClock ladder = make_ladder(d, opt.delta);
        emit(bound_eq5(d, delta_distribution(ladder.jumps, ladder.jumps)), opt.delta);
        const Theorem2Report t2 = theorem2_bounds(d, opt.delta);
        emit(t2.headline, opt.delta);
        emit(t2.appendix_exact, opt.delta);
        emit(theorem1_bounds(d, opt.delta, 1, opt.delta, opt.delta), opt.delta);
        emit(perfect_vs_ladder_bounds(d, opt.delta), opt.delta);
    }
    if (csv)
        std::fclose(csv);
    return 0;
}

int run_absorb(const Options& opt)
{
    for (const int d : parse_d_range(opt.d_range)) {
        const StochasticClock ladder = make_ladder(d, opt.delta);
        const DeltaDistribution delta = delta_distribution(ladder.jumps, ladder.jumps);
        const long z = resolve_z0(opt.z0, d);

        const AbsorptionProblem necessary{delta, -1, d + 1, z};
        const AbsorptionProblem sufficient{delta, -d - 1, 2 * d + 1, z};
        const double solver_nec = solve_expected_absorption(necessary);
        const double solver_suf = solve_expected_absorption(sufficient);
        const double closed_nec = closed_form_D(d, static_cast<double>(z), delta,
                                                BoundaryPair::necessary);
        const double closed_suf = closed_form_D(d, static_cast<double>(z), delta,
                                                BoundaryPair::sufficient);
        std::printf("d=%-5d z=%-5ld necessary: solver=%s closed=%s diff=%s\n", d, z,
                    fmt(solver_nec).c_str(), fmt(closed_nec).c_str(),
                    fmt(std::abs(solver_nec - closed_nec)).c_str());
        std::printf("d=%-5d z=%-5ld sufficient: solver=%s closed=%s diff=%s\n", d, z,
                    fmt(solver_suf).c_str(), fmt(closed_suf).c_str(),
                    fmt(std::abs(solver_suf - closed_suf)).c_str());
    }
    return 0;
}

int run_verify(const Options& opt)
{
    bool all_ok = true;
    for (const int d : parse_d_range(opt.d_range)) {
        const StochasticClock clock = build_clock(opt.clock_spec, d, opt.delta);

        const KrausSet kraus = build_kraus(clock);
        const double completeness = kraus.completeness_residual();

        Eigen::MatrixXd rho =
            Eigen::MatrixXd::Identity(d + 1, d + 1) / static_cast<double>(d + 1);
        const ChannelComparison cmp = apply_channel_two_ways(clock, rho);

        const CertificatePair pair = build_certificate(clock);
        const CertificateReport report =
            verify_continuity_certificate(pair, clock, 1000, opt.seed);

        const bool ok = completeness <= 1e-12 && cmp.max_entry_difference <= 1e-12
                     && report.ok;
        all_ok = all_ok && ok;
        std::printf("d=%-4d completeness=%s channel_diff=%s construction=%s "
                    "minQF(X)=%s minQF(Z)=%s ptrace_offdiag=%s inf_norm=%s "
                    "eps_err=%s -> %s\n",
                    d, fmt(completeness).c_str(), fmt(cmp.max_entry_difference).c_str(),
                    fmt(report.construction_residual).c_str(),
                    fmt(report.min_quadratic_form_X).c_str(),
                    fmt(report.min_quadratic_form_Z).c_str(),
                    fmt(report.partial_trace_offdiag).c_str(),
                    fmt(report.inf_norm).c_str(), fmt(report.epsilon_error).c_str(),
                    ok ? "ok" : "FAIL");
        if (!ok && !report.witness.empty())
            std::printf("      witness: %s\n", report.witness.c_str());
    }
    return all_ok ? 0 : kExitVerificationFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Stochastic clocks in the Alternate Ticks Game: simulation, "
                 "analytic bounds, and channel verification"};
    app.require_subcommand(1);

    Options opt;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--d", opt.d_range, "dimension, <start:stop:step> or a single value");
        cmd->add_option("--delta", opt.delta, "ladder jump probability");
        cmd->add_option("--runs", opt.runs, "Monte Carlo runs per dimension");
        cmd->add_option("--seed", opt.seed, "base seed; per-run streams derive from it");
        cmd->add_option("--z0", opt.z0, "initial offset, integer or 'half'");
        cmd->add_option("--cap", opt.cap, "per-run application cap");
        cmd->add_option("--out", opt.out_path, "CSV output path");
        cmd->add_option("--clock", opt.clock_spec,
                        "ladder | perfect | custom:<p0,p1,...>");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "play the AT Game and estimate N");
    CLI::App* bounds = app.add_subcommand("bounds", "evaluate the analytic bounds");
    CLI::App* absorb = app.add_subcommand("absorb", "solver vs closed-form absorption times");
    CLI::App* verify = app.add_subcommand("verify", "Kraus/Choi/certificate residuals");
    CLI::App* fig1 = app.add_subcommand("reproduce-fig1",
                                        "ladder sweep, delta=0.05, 500 runs, z0=d/2");
    for (CLI::App* cmd : {simulate, bounds, absorb, verify, fig1})
        add_common(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadArguments;
    }

    try {
        if (simulate->parsed())
            return run_simulate(opt, false);
        if (fig1->parsed()) {
            if (fig1->get_option("--d")->empty())
                opt.d_range = "20:200:20";
            return run_simulate(opt, true);
        }
        if (bounds->parsed())
            return run_bounds(opt);
        if (absorb->parsed())
            return run_absorb(opt);
        if (verify->parsed())
            return run_verify(opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadArguments;
    }
    return 0;
}
