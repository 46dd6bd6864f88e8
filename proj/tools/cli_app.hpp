#pragma once

// Command-line front end: verify, find-bounds, gap-table, classify, check.
//
// Exit codes: 0 proven / success, 1 refuted (or a rejected certificate),
// 2 undecided / budget exhausted, 64 usage error.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "shafer/shafer.hpp"

namespace shafer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitUndecided = 2;
inline constexpr int kExitUsage = 64;

enum class Format { json, csv, human };

struct OutputConfig {
    std::optional<Format> format;
    int precision = 12;
    std::string destination; // empty: standard output
};

/// Thrown for malformed or out-of-range arguments discovered after parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string format_number(double v, int precision)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

inline double parse_double(const std::string &text)
{
    double v = 0.0;
    const char *first = text.data();
    const char *last = text.data() + text.size();
    if (!text.empty() && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw UsageError("not a finite number: '" + text + "'");
    }
    return v;
}

/// Parameter value: a decimal number, or one of the named constants
/// pi, b1 = 2/(pi-2), b2 = 2, phi = (1+sqrt 5)/2, enclosed rigorously.
inline Interval parse_parameter(const std::string &text)
{
    if (text == "pi") {
        return pi_enc();
    }
    if (text == "b1") {
        return b1_enclosure();
    }
    if (text == "b2") {
        return Interval(2.0);
    }
    if (text == "phi") {
        return golden_ratio_enclosure();
    }
    return Interval(parse_double(text));
}

/// Same as parse_parameter but collapsed to the nearest double.
inline double parse_scalar_parameter(const std::string &text)
{
    if (text == "pi") {
        return std::numbers::pi;
    }
    if (text == "b1") {
        return thresholds().b1;
    }
    if (text == "b2") {
        return thresholds().b2;
    }
    if (text == "phi") {
        return thresholds().golden_ratio;
    }
    return parse_double(text);
}

class Emitter {
public:
    explicit Emitter(const OutputConfig &cfg, std::ostream &fallback) : stream_(&fallback)
    {
        if (!cfg.destination.empty()) {
            file_.open(cfg.destination);
            if (!file_) {
                throw UsageError("cannot open output file '" + cfg.destination + "'");
            }
            stream_ = &file_;
        }
    }
    std::ostream &out() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream *stream_;
};

// ---------------------------------------------------------------------------
// Commands

struct VerifyArgs {
    std::optional<std::string> a;
    std::string b;
    std::string relation;
    std::vector<double> domain;
    std::optional<std::vector<double>> equality;
    std::optional<std::string> minus_a;
    std::optional<std::string> minus_b;
};

inline Claim build_claim(const VerifyArgs &args)
{
    const Interval b = parse_parameter(args.b);
    if (!(b.lo() > 0.0)) {
        throw UsageError("--b must be positive");
    }
    std::optional<Interval> a;
    if (args.a) {
        a = parse_parameter(*args.a);
        if (!(a->lo() > 0.0)) {
            throw UsageError("--a must be positive");
        }
    }
    Claim claim;
    claim.relation = args.relation == "ge" ? Relation::ge : Relation::le;
    if (!args.domain.empty()) {
        if (args.domain.size() != 2 || !(args.domain[0] < args.domain[1]) || args.domain[0] < 0.0 ||
            args.domain[1] > 1.0) {
            throw UsageError("--domain takes LO HI with 0 <= LO < HI <= 1");
        }
        claim.domain = Interval(args.domain[0], args.domain[1]);
    }
    if (args.minus_a.has_value() != args.minus_b.has_value()) {
        throw UsageError("--minus-a and --minus-b must be given together");
    }
    if (args.minus_a) {
        const Interval ma = parse_parameter(*args.minus_a);
        const Interval mb = parse_parameter(*args.minus_b);
        if (!(ma.lo() > 0.0) || !(mb.lo() > 0.0)) {
            throw UsageError("--minus-a and --minus-b must be positive");
        }
        claim.target = DifferenceTarget{{a ? *a : b + Interval(1.0), b}, {ma, mb}};
    } else if (!a || (a->is_point() && b.is_point() && a->lo() == b.lo() + 1.0)) {
        claim.target = ReducedTarget{b};
    } else {
        claim.target = FamilyTarget{{*a, b}};
    }
    claim.equality_set = args.equality ? *args.equality : default_equality_set(claim.target, claim.domain);
    return claim;
}

inline void write_certificate(std::ostream &os, const Certificate &cert, Format format, int precision)
{
    auto num = [&](double v) { return format_number(v, precision); };
    switch (format) {
    case Format::json:
        os << to_json(cert).dump(2) << '\n';
        break;
    case Format::csv:
        os << "verdict,lo,hi,kind,enclosure_lo,enclosure_hi,anchor\n";
        for (const Node &n : cert.nodes) {
            os << to_string(cert.verdict) << ',' << num(n.lo) << ',' << num(n.hi) << ',' << to_string(n.kind)
               << ',' << num(n.enclosure.lo()) << ',' << num(n.enclosure.hi()) << ','
               << (n.anchor ? num(*n.anchor) : "") << '\n';
        }
        break;
    case Format::human: {
        os << "verdict: " << to_string(cert.verdict) << '\n';
        os << "claim:   " << claim_to_json(cert.claim).dump() << '\n';
        os << "nodes:   " << cert.stats.nodes << " (max depth " << cert.stats.depth << ")\n";
        if (cert.verdict != Verdict::proven && !cert.nodes.empty()) {
            const Node &n = cert.nodes.front();
            os << (cert.verdict == Verdict::refuted ? "witness: x = " : "widest unresolved node: [")
               << num(n.lo);
            if (cert.verdict != Verdict::refuted) {
                os << ", " << num(n.hi) << ']';
            }
            os << "  enclosure [" << num(n.enclosure.lo()) << ", " << num(n.enclosure.hi()) << "]\n";
        }
        break;
    }
    }
}

inline int exit_code_for(Verdict v)
{
    switch (v) {
    case Verdict::proven:
        return kExitOk;
    case Verdict::refuted:
        return kExitRefuted;
    case Verdict::undecided:
        return kExitUndecided;
    }
    return kExitUndecided;
}

struct GapRow {
    double x;
    double f_b;
    double asin;
    double gap;
};

/// n rows at x = i/(n-1); the x = 1 row uses the closed forms.
inline std::vector<GapRow> gap_table(double b, int n)
{
    if (n < 2) {
        throw UsageError("--n must be at least 2");
    }
    const ReducedParam rb(b);
    std::vector<GapRow> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (i == n - 1) {
            rows.push_back({1.0, (b + 1.0) / b, std::numbers::pi / 2.0, endpoint_gap(rb)});
            continue;
        }
        const double x = static_cast<double>(i) / static_cast<double>(n - 1);
        rows.push_back({x, f(rb, x), target(x), h(rb, x)});
    }
    return rows;
}

inline void write_gap_table(std::ostream &os, double b, const std::vector<GapRow> &rows, Format format,
                            int precision)
{
    auto num = [&](double v) { return format_number(v, precision); };
    switch (format) {
    case Format::csv:
        os << "x,f_b,asin,gap\n";
        for (const auto &r : rows) {
            os << num(r.x) << ',' << num(r.f_b) << ',' << num(r.asin) << ',' << num(r.gap) << '\n';
        }
        break;
    case Format::json: {
        nlohmann::json j = {{"b", b}, {"rows", nlohmann::json::array()}};
        for (const auto &r : rows) {
            j["rows"].push_back({{"x", r.x}, {"f_b", r.f_b}, {"asin", r.asin}, {"gap", r.gap}});
        }
        os << j.dump(2) << '\n';
        break;
    }
    case Format::human: {
        const int w = precision + 8;
        os << std::setw(w) << "x" << std::setw(w) << "f_b" << std::setw(w) << "asin" << std::setw(w) << "gap"
           << '\n';
        for (const auto &r : rows) {
            os << std::setw(w) << num(r.x) << std::setw(w) << num(r.f_b) << std::setw(w) << num(r.asin)
               << std::setw(w) << num(r.gap) << '\n';
        }
        break;
    }
    }
}

inline void write_regime(std::ostream &os, const Regime &r, Format format, int precision)
{
    auto num = [&](double v) { return format_number(v, precision); };
    switch (format) {
    case Format::json: {
        nlohmann::json j = {{"b", r.b},
                            {"regime", std::string(to_string(r.tag))},
                            {"thresholds",
                             {{"golden_ratio", r.thresholds.golden_ratio},
                              {"b1", r.thresholds.b1},
                              {"b2", r.thresholds.b2}}},
                            {"endpoint_gap", r.endpoint_gap}};
        j["critical_point"] = r.critical_point ? nlohmann::json(*r.critical_point) : nlohmann::json(nullptr);
        os << j.dump(2) << '\n';
        break;
    }
    case Format::csv:
        os << "b,regime,golden_ratio,b1,b2,critical_point,endpoint_gap\n"
           << num(r.b) << ',' << to_string(r.tag) << ',' << num(r.thresholds.golden_ratio) << ','
           << num(r.thresholds.b1) << ',' << num(r.thresholds.b2) << ','
           << (r.critical_point ? num(*r.critical_point) : "") << ',' << num(r.endpoint_gap) << '\n';
        break;
    case Format::human:
        os << "b:              " << num(r.b) << '\n'
           << "regime:         " << to_string(r.tag) << '\n'
           << "thresholds:     phi = " << num(r.thresholds.golden_ratio) << ", b1 = " << num(r.thresholds.b1)
           << ", b2 = " << num(r.thresholds.b2) << '\n'
           << "critical point: " << (r.critical_point ? num(*r.critical_point) : "undefined") << '\n'
           << "endpoint gap:   " << num(r.endpoint_gap) << '\n';
        break;
    }
}

struct BoundsReport {
    double b1;
    double b2;
    double b1_closed_form;
    double b1_endpoint_root;
    double b2_closed_form;
    bool agreement;
};

inline BoundsReport find_bounds(double tol, const VerifierConfig &cfg)
{
    if (!(tol >= kMinParameterTolerance)) {
        throw UsageError("--tol must be at least 1e-12");
    }
    BoundsReport r{};
    r.b1 = find_upper_parameter(tol, cfg);
    r.b2 = find_lower_parameter(tol, cfg);
    r.b1_closed_form = thresholds().b1;
    r.b2_closed_form = thresholds().b2;
    r.b1_endpoint_root = endpoint_gap_root(tol);
    r.agreement = std::fabs(r.b1 - r.b1_closed_form) <= tol && std::fabs(r.b2 - r.b2_closed_form) <= tol &&
                  std::fabs(r.b1 - r.b1_endpoint_root) <= tol;
    return r;
}

inline void write_bounds(std::ostream &os, const BoundsReport &r, Format format, int precision)
{
    auto num = [&](double v) { return format_number(v, precision); };
    switch (format) {
    case Format::json:
        os << nlohmann::json{{"b1", r.b1},
                             {"b2", r.b2},
                             {"b1_closed_form", r.b1_closed_form},
                             {"b1_endpoint_root", r.b1_endpoint_root},
                             {"b2_closed_form", r.b2_closed_form},
                             {"agreement", r.agreement}}
                  .dump(2)
           << '\n';
        break;
    case Format::csv:
        os << "b1,b2,b1_closed_form,b1_endpoint_root,b2_closed_form,agreement\n"
           << num(r.b1) << ',' << num(r.b2) << ',' << num(r.b1_closed_form) << ',' << num(r.b1_endpoint_root)
           << ',' << num(r.b2_closed_form) << ',' << (r.agreement ? "true" : "false") << '\n';
        break;
    case Format::human:
        os << "b1 (least upper bound):     " << num(r.b1) << "  closed form 2/(pi-2) = " << num(r.b1_closed_form)
           << "  endpoint root = " << num(r.b1_endpoint_root) << '\n'
           << "b2 (greatest lower bound):  " << num(r.b2) << "  closed form = " << num(r.b2_closed_form) << '\n'
           << "agreement:                  " << (r.agreement ? "yes" : "no") << '\n';
        break;
    }
}

// ---------------------------------------------------------------------------
// Dispatch

inline int run(const std::vector<std::string> &argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Certified Shafer-Fink type bounds for arcsine", "shafer"};
    app.require_subcommand(1);
    app.fallthrough();

    OutputConfig output;
    std::string format_name;
    double tol = 1e-9;
    VerifierConfig vcfg;
    app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"json", "csv", "human"}));
    app.add_option("--precision", output.precision, "Significant digits for csv/human output")
        ->check(CLI::Range(1, 17));
    app.add_option("--tol", tol, "Parameter search tolerance (>= 1e-12)");
    app.add_option("--max-depth", vcfg.max_depth, "Maximum bisection depth")->check(CLI::PositiveNumber);
    app.add_option("--workers", vcfg.workers, "Verifier worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", output.destination, "Write output to PATH instead of standard output");

    VerifyArgs vargs;
    auto *verify_cmd = app.add_subcommand("verify", "Certify the sign of phi_{a,b} - asin on a subinterval of [0,1]");
    verify_cmd->add_option("--a", vargs.a, "Numerator parameter (default b + 1)");
    verify_cmd->add_option("--b", vargs.b, "Denominator parameter; number or pi|b1|b2|phi")->required();
    verify_cmd->add_option("--relation", vargs.relation, "ge: >= 0, le: <= 0")
        ->required()
        ->check(CLI::IsMember({"ge", "le"}));
    verify_cmd->add_option("--domain", vargs.domain, "LO HI")->expected(2);
    verify_cmd->add_option("--equality", vargs.equality, "Points where equality is asserted")->expected(0, -1);
    verify_cmd->add_option("--minus-a", vargs.minus_a, "Subtract phi_{minus-a,minus-b} instead of asin");
    verify_cmd->add_option("--minus-b", vargs.minus_b);

    auto *bounds_cmd = app.add_subcommand("find-bounds", "Locate the extremal parameters b1 and b2");

    std::string table_b;
    int table_n = 11;
    auto *table_cmd = app.add_subcommand("gap-table", "Tabulate f_b, asin and h_b on a uniform grid");
    table_cmd->add_option("--b", table_b, "Parameter b")->required();
    table_cmd->add_option("--n", table_n, "Number of grid points (>= 2)");

    std::string classify_b;
    auto *classify_cmd = app.add_subcommand("classify", "Report the regime of b");
    classify_cmd->add_option("--b", classify_b, "Parameter b")->required();

    std::string check_in;
    auto *check_cmd = app.add_subcommand("check", "Replay a JSON certificate");
    check_cmd->add_option("--in", check_in, "Certificate file")->required()->check(CLI::ExistingFile);

    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    auto format_or = [&](Format fallback) {
        if (format_name == "json") {
            return Format::json;
        }
        if (format_name == "csv") {
            return Format::csv;
        }
        if (format_name == "human") {
            return Format::human;
        }
        return fallback;
    };

    try {
        Emitter emit(output, out);
        if (*verify_cmd) {
            const Claim claim = build_claim(vargs);
            const Certificate cert = verify(claim, vcfg);
            write_certificate(emit.out(), cert, format_or(Format::human), output.precision);
            return exit_code_for(cert.verdict);
        }
        if (*bounds_cmd) {
            const BoundsReport r = find_bounds(tol, vcfg);
            write_bounds(emit.out(), r, format_or(Format::human), output.precision);
            return kExitOk;
        }
        if (*table_cmd) {
            const double b = parse_scalar_parameter(table_b);
            if (!(b > 0.0)) {
                throw UsageError("--b must be positive");
            }
            write_gap_table(emit.out(), b, gap_table(b, table_n), format_or(Format::csv), output.precision);
            return kExitOk;
        }
        if (*classify_cmd) {
            const double b = parse_scalar_parameter(classify_b);
            if (!(b > 0.0)) {
                throw UsageError("--b must be positive");
            }
            write_regime(emit.out(), classify(b), format_or(Format::human), output.precision);
            return kExitOk;
        }
        if (*check_cmd) {
            std::ifstream in(check_in);
            const Certificate cert = certificate_from_json(nlohmann::json::parse(in));
            const ReplayReport report = replay(cert);
            emit.out() << (report.accepted ? "accepted" : "rejected")
                       << (report.reason.empty() ? "" : ": " + report.reason) << '\n';
            return report.accepted ? kExitOk : kExitRefuted;
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UndecidedError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUndecided;
    } catch (const nlohmann::json::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, out, err);
}

} // namespace shafer::cli
