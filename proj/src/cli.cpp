#include "bimeans/cli.hpp"

#include "bimeans/catalog.hpp"
#include "bimeans/means.hpp"
#include "bimeans/report.hpp"
#include "bimeans/verifier.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace bimeans::cli {

namespace {

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

double parse_number(std::string_view text, std::string_view what)
{
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw UsageError("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, sep))
        parts.push_back(cur);
    if (!text.empty() && text.back() == sep)
        parts.emplace_back();
    return parts;
}

Interval parse_range(const std::string& text, std::string_view what)
{
    const auto parts = split(text, ':');
    if (parts.size() != 2)
        throw UsageError(std::string(what) + " must be lo:hi");
    return Interval{parse_number(parts[0], what), parse_number(parts[1], what)};
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Names: arithmetic|A, geometric|G, heronian|He, identric|I, s|s-mean|S,
// power|A_k with an order, f2|unnormalized with a nonzero order. The order
// comes from `k` or from a ":<k>" suffix.
MeanKind parse_kind(const std::string& spec, std::optional<double> k)
{
    std::string name = spec;
    if (const auto colon = spec.find(':'); colon != std::string::npos) {
        name = spec.substr(0, colon);
        k = parse_number(std::string_view(spec).substr(colon + 1), "mean order");
    }
    const std::string n = lower(name);
    if (n == "arithmetic" || n == "a")
        return arithmetic();
    if (n == "geometric" || n == "g")
        return geometric();
    if (n == "heronian" || n == "he")
        return heronian_kind();
    if (n == "identric" || n == "i")
        return identric_kind();
    if (n == "s" || n == "s-mean" || n == "smean")
        return s_mean_kind();
    if (n == "power" || n == "a_k") {
        if (!k)
            throw UsageError("mean '" + spec + "' needs an order (--k or power:<k>)");
        return power(*k);
    }
    if (n == "f2" || n == "unnormalized") {
        if (!k)
            throw UsageError("mean '" + spec + "' needs an order (--k or f2:<k>)");
        return unnormalized(*k);
    }
    throw UsageError("unknown mean '" + spec + "'");
}

struct Sink
{
    std::ostream& out;
    std::optional<std::string> path;
    std::ostringstream buffer;

    std::ostream& stream() { return path ? static_cast<std::ostream&>(buffer) : out; }

    void flush()
    {
        if (!path)
            return;
        std::ofstream file(*path, std::ios::binary);
        if (!file)
            throw UsageError("cannot write " + *path);
        file << buffer.str();
    }
};

// ---------------------------------------------------------------------------

struct EvalArgs
{
    std::string mean;
    double a = 0.0;
    double b = 0.0;
    std::optional<double> k;
};

int do_eval(const EvalArgs& args, std::ostream& out)
{
    const PositivePair p(args.a, args.b);
    out << format_double(eval_mean(parse_kind(args.mean, args.k), p)) << '\n';
    return kExitOk;
}

struct TableArgs
{
    std::string means;
    double a = 0.0;
    std::string b_range;
};

int do_table(const TableArgs& args, std::ostream& out)
{
    std::vector<MeanKind> kinds;
    for (const auto& m : split(args.means, ','))
        kinds.push_back(parse_kind(m, std::nullopt));
    if (kinds.empty())
        throw UsageError("--means is empty");
    const auto parts = split(args.b_range, ':');
    if (parts.size() != 3)
        throw UsageError("--b-range must be lo:hi:steps");
    const double lo = parse_number(parts[0], "--b-range");
    const double hi = parse_number(parts[1], "--b-range");
    const double steps_d = parse_number(parts[2], "--b-range");
    if (!(steps_d >= 1.0) || steps_d != std::floor(steps_d))
        throw UsageError("--b-range steps must be a positive integer");
    const auto steps = static_cast<std::size_t>(steps_d);

    out << "a,b";
    for (const auto& k : kinds)
        out << ',' << to_string(k);
    out << '\n';
    for (std::size_t i = 0; i < steps; ++i) {
        const double b = steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
        const PositivePair p(args.a, b);
        out << format_double(args.a) << ',' << format_double(b);
        for (const auto& k : kinds)
            out << ',' << format_double(eval_mean(k, p));
        out << '\n';
    }
    return kExitOk;
}

struct CheckArgs
{
    std::string ineq;
    bool all = false;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    std::string a_range = "1e-3:1e3";
    std::string b_range = "1e-3:1e3";
    std::string k_range;
    std::string beta_range;
    double tol = kDefaultTolerance;
    std::string format = "json";
    std::size_t grid = 8;
    std::size_t refine = 20;
    unsigned threads = 1;
    std::string out_path;
};

int do_check(const CheckArgs& args, std::ostream& out)
{
    if (args.all == !args.ineq.empty())
        throw UsageError("check needs exactly one of --ineq <id> or --all");

    std::vector<InequalitySpec> specs;
    auto add_with_subclaim = [&specs](const InequalitySpec& s) {
        specs.push_back(s);
        if (auto sub = stated_subclaim(s))
            specs.push_back(*sub);
    };
    if (args.all) {
        for (const auto& s : catalog())
            add_with_subclaim(s);
    } else {
        const InequalitySpec* s = find_spec(args.ineq);
        if (!s)
            throw UsageError("unknown inequality id '" + args.ineq + "'");
        add_with_subclaim(*s);
    }

    SearchBox box;
    box.a = parse_range(args.a_range, "--a-range");
    box.b = parse_range(args.b_range, "--b-range");
    if (!args.k_range.empty())
        box.k = parse_range(args.k_range, "--k-range");
    if (!args.beta_range.empty())
        box.beta = parse_range(args.beta_range, "--beta-range");

    VerifierConfig cfg;
    cfg.seed = args.seed;
    cfg.n_random = args.samples;
    cfg.grid_per_axis = args.grid;
    cfg.refine_steps = args.refine;
    cfg.tolerance = args.tol;
    cfg.threads = std::max(1u, args.threads);

    std::vector<FalsificationReport> reports;
    for (const auto& s : specs)
        reports.push_back(falsify(s, box, cfg));

    std::size_t total = 0;
    for (const auto& r : reports)
        total += r.violation_count;

    Sink sink{out, args.out_path.empty() ? std::nullopt : std::optional<std::string>(args.out_path), {}};
    std::ostream& os = sink.stream();
    if (args.format == "json") {
        nlohmann::json doc;
        doc["seed"] = args.seed;
        doc["tolerance"] = args.tol;
        doc["samples"] = args.samples;
        doc["reports"] = nlohmann::json::array();
        for (const auto& r : reports)
            doc["reports"].push_back(to_json(r));
        doc["totalViolations"] = total;
        os << doc.dump(2) << '\n';
    } else if (args.format == "csv") {
        os << check_csv_header() << '\n';
        for (const auto& r : reports)
            os << to_csv_row(r) << '\n';
    } else {
        for (const auto& r : reports) {
            os << r.spec_id << ": " << (r.violation_count ? "VIOLATED" : "ok") << "  min_gap="
               << format_double(r.min_gap) << "  samples=" << r.samples_evaluated;
            if (r.argmin)
                os << "  argmin=(a=" << format_double(r.argmin->a) << ", b=" << format_double(r.argmin->b)
                   << (r.argmin->k ? ", k=" + format_double(*r.argmin->k) : "")
                   << (r.argmin->beta ? ", beta=" + format_double(*r.argmin->beta) : "") << ")";
            if (r.violation_count)
                os << "  violations=" << r.violation_count;
            os << '\n';
        }
    }
    sink.flush();
    return total ? kExitViolation : kExitOk;
}

struct MonoArgs
{
    std::string target;
    double a = 0.0;
    double b = 0.0;
    std::string k_grid;
    // f1 defaults to kDefaultTolerance; f2 steps can be far below it.
    std::optional<double> tol;
};

int do_mono(const MonoArgs& args, std::ostream& out)
{
    const MonotoneTarget target = args.target == "f1" ? MonotoneTarget::F1 : MonotoneTarget::F2;
    std::vector<double> grid;
    for (const auto& part : split(args.k_grid, ','))
        grid.push_back(parse_number(part, "--k-grid"));
    const auto rep = monotonicity_scan(target, PositivePair(args.a, args.b), grid,
                                       args.tol.value_or(target == MonotoneTarget::F1 ? kDefaultTolerance : 0.0));

    out << "k," << args.target << '\n';
    for (std::size_t i = 0; i < rep.ks.size(); ++i)
        out << format_double(rep.ks[i]) << ',' << format_double(rep.values[i]) << '\n';
    const char* claim = target == MonotoneTarget::F1 ? "increasing" : "decreasing";
    if (rep.degenerate)
        out << "# degenerate: a == b, f1 is constant\n";
    else if (rep.holds())
        out << "# strictly " << claim << ": holds\n";
    else
        for (auto i : rep.failures)
            out << "# strictly " << claim << ": fails between k=" << format_double(rep.ks[i])
                << " and k=" << format_double(rep.ks[i + 1]) << '\n';
    return rep.holds() ? kExitOk : kExitViolation;
}

struct DerivArgs
{
    double a = 0.0;
    double b = 0.0;
    double k = 0.0;
    double h = 1e-5;
    double rel_tol = 1e-6;
    double abs_tol = 1e-8;
};

int do_deriv(const DerivArgs& args, std::ostream& out)
{
    const auto rep = derivative_consistency(PositivePair(args.a, args.b), args.k, args.h);
    out << "quantity,analytic,central_difference,abs_dev,rel_dev,status\n";
    bool ok = true;
    for (const auto& [name, c] : {std::pair{"dlnf1/dk", rep.f1}, std::pair{"dlnf2/dk", rep.f2}}) {
        const bool pass = c.within(args.rel_tol, args.abs_tol);
        ok = ok && pass;
        out << name << ',' << format_double(c.analytic) << ',' << format_double(c.numeric) << ','
            << format_double(c.abs_dev) << ',' << format_double(c.rel_dev) << ',' << (pass ? "ok" : "FAIL")
            << '\n';
    }
    return ok ? kExitOk : kExitViolation;
}

struct TightArgs
{
    std::string ineq;
    std::string path;
    int steps = 6;
    double a = 1.0;
    std::optional<double> k;
    std::optional<double> beta;
};

int do_tightness(const TightArgs& args, std::ostream& out)
{
    const InequalitySpec* s = find_spec(args.ineq);
    if (!s)
        throw UsageError("unknown inequality id '" + args.ineq + "'");
    const PathKind path = args.path == "diagonal" ? PathKind::ContractToDiagonal : PathKind::BlowUpRatio;
    const auto series = tightness_scan(*s, path, args.steps, args.a, args.k, args.beta);

    const std::size_t members = s->chain.size();
    out << "j,a,b,k,beta,min_gap";
    for (std::size_t i = 0; i + 1 < members; ++i)
        out << ",gap_" << i;
    for (std::size_t i = 0; i < members; ++i)
        out << ",value_" << i;
    out << '\n';
    for (const auto& st : series.steps) {
        out << st.j << ',' << format_double(st.point.a) << ',' << format_double(st.point.b) << ','
            << (st.point.k ? format_double(*st.point.k) : "") << ','
            << (st.point.beta ? format_double(*st.point.beta) : "") << ',' << format_double(st.min_gap);
        for (double g : st.gaps)
            out << ',' << format_double(g);
        for (double v : st.values)
            out << ',' << format_double(v);
        out << '\n';
    }
    if (series.truncated)
        out << "# truncated: " << series.cause << '\n';
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Bivariate means: evaluation and numerical inequality checks", "bimeans"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate one mean at (a, b)");
    eval->add_option("--mean", eval_args.mean, "arithmetic|geometric|power|heronian|identric|s|f2")->required();
    eval->add_option("--a", eval_args.a)->required();
    eval->add_option("--b", eval_args.b)->required();
    eval->add_option("--k", eval_args.k, "Order for power and f2");

    TableArgs table_args;
    auto* table = app.add_subcommand("table", "CSV table of means over a range of b");
    table->add_option("--means", table_args.means, "Comma-separated list, orders as power:0.5")->required();
    table->add_option("--a", table_args.a)->required();
    table->add_option("--b-range", table_args.b_range, "lo:hi:steps")->required();

    CheckArgs check_args;
    auto* check_cmd = app.add_subcommand("check", "Search for counterexamples to catalog inequalities");
    check_cmd->add_option("--ineq", check_args.ineq, "Inequality id");
    check_cmd->add_flag("--all", check_args.all, "Every catalog inequality");
    check_cmd->add_option("--samples", check_args.samples, "Random samples per inequality");
    check_cmd->add_option("--seed", check_args.seed);
    check_cmd->add_option("--a-range", check_args.a_range, "lo:hi");
    check_cmd->add_option("--b-range", check_args.b_range, "lo:hi");
    check_cmd->add_option("--k-range", check_args.k_range, "lo:hi");
    check_cmd->add_option("--beta-range", check_args.beta_range, "lo:hi");
    check_cmd->add_option("--tol", check_args.tol);
    check_cmd->add_option("--format", check_args.format)->check(CLI::IsMember({"json", "csv", "text"}));
    check_cmd->add_option("--grid", check_args.grid, "Grid points per axis");
    check_cmd->add_option("--refine", check_args.refine, "Refinement steps");
    check_cmd->add_option("--threads", check_args.threads);
    check_cmd->add_option("--out", check_args.out_path, "Write the report to this file");

    MonoArgs mono_args;
    auto* mono = app.add_subcommand("mono", "Monotonicity of f1 = A_k or f2 = (a^k+b^k)^(1/k) in k");
    mono->add_option("--target", mono_args.target)->required()->check(CLI::IsMember({"f1", "f2"}));
    mono->add_option("--a", mono_args.a)->required();
    mono->add_option("--b", mono_args.b)->required();
    mono->add_option("--k-grid", mono_args.k_grid, "Comma-separated increasing orders")->required();
    mono->add_option("--tol", mono_args.tol, "Relative step required (default 1e-12 for f1, 0 for f2)");

    DerivArgs deriv_args;
    auto* deriv = app.add_subcommand("deriv-check", "Closed-form k-derivatives against central differences");
    deriv->add_option("--a", deriv_args.a)->required();
    deriv->add_option("--b", deriv_args.b)->required();
    deriv->add_option("--k", deriv_args.k)->required();
    deriv->add_option("--h", deriv_args.h);
    deriv->add_option("--rel-tol", deriv_args.rel_tol);
    deriv->add_option("--abs-tol", deriv_args.abs_tol);

    TightArgs tight_args;
    auto* tight = app.add_subcommand("tightness", "Margins along b -> a or b/a -> infinity");
    tight->add_option("--ineq", tight_args.ineq)->required();
    tight->add_option("--path", tight_args.path)->required()->check(CLI::IsMember({"diagonal", "ratio"}));
    tight->add_option("--steps", tight_args.steps)->required();
    tight->add_option("--a", tight_args.a);
    tight->add_option("--k", tight_args.k);
    tight->add_option("--beta", tight_args.beta);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*eval)
            return do_eval(eval_args, out);
        if (*table)
            return do_table(table_args, out);
        if (*check_cmd)
            return do_check(check_args, out);
        if (*mono)
            return do_mono(mono_args, out);
        if (*deriv)
            return do_deriv(deriv_args, out);
        if (*tight)
            return do_tightness(tight_args, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    err << "error: a subcommand is required\n" << app.help();
    return kExitUsage;
}

} // namespace bimeans::cli
