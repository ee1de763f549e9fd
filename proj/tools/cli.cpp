#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "plh/comparison.hpp"
#include "plh/diagnostics.hpp"
#include "plh/exponents.hpp"
#include "plh/family.hpp"
#include "plh/inequality.hpp"
#include "plh/ode.hpp"

namespace plh::cli {

using Json = nlohmann::ordered_json;

namespace {

/// Malformed option values that CLI11 cannot catch (specs, lists).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("cannot parse " + what + " from '" + s + "'");
    }
}

// "<x>", "<name>" or "<x>*<name>" where name resolves to `named`.
double parse_scaled(const std::string& s, const std::string& name, double named, const std::string& what) {
    if (s == name) return named;
    const auto star = s.find('*');
    if (star != std::string::npos && trim(s.substr(star + 1)) == name)
        return parse_number(trim(s.substr(0, star)), what) * named;
    return parse_number(s, what);
}

Potential parse_potential(const std::string& spec, const Params& P) {
    if (spec == "zero") return Potential::zero();
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw UsageError("potential must be zero, hardy:<x>, improved:<x> or tabulated:<file>");
    const std::string kind = spec.substr(0, colon);
    const std::string arg = trim(spec.substr(colon + 1));
    if (kind == "hardy") return Potential::hardy(parse_scaled(arg, "ch", critical_hardy(P), "lambda"));
    if (kind == "improved") {
        if (arg == "mid") return Potential::improved(c_star(P) / 2.0);
        return Potential::improved(parse_scaled(arg, "cstar", c_star(P), "epsilon"));
    }
    if (kind == "tabulated") {
        std::ifstream in(arg);
        if (!in) throw UsageError("cannot open potential table '" + arg + "'");
        std::vector<double> nodes, values;
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line.substr(0, line.find('#')));
            if (line.empty()) continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double r, v;
            if (!(ls >> r >> v)) throw UsageError("bad potential table line: " + line);
            nodes.push_back(r);
            values.push_back(v);
        }
        return Potential::tabulated(std::move(nodes), std::move(values));
    }
    throw UsageError("unknown potential kind '" + kind + "'");
}

// "c=1,alpha=-0.75,beta=0,tau=0"; alpha accepts "crit" for (p-N)/p.
RadialFamily parse_family(const std::string& spec, const Params& P) {
    RadialFamily f;
    for (const auto& item : split(spec, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("family entry '" + item + "' is not key=value");
        const std::string key = trim(item.substr(0, eq));
        const std::string val = trim(item.substr(eq + 1));
        if (key == "c") f.c = parse_number(val, "c");
        else if (key == "alpha") f.alpha = parse_scaled(val, "crit", P.critical_alpha(), "alpha");
        else if (key == "beta") f.beta = parse_number(val, "beta");
        else if (key == "tau") f.tau = parse_number(val, "tau");
        else throw UsageError("unknown family key '" + key + "'");
    }
    f.validate();
    return f;
}

std::vector<double> parse_eps_list(const std::string& list, const Params& P) {
    std::vector<double> out;
    for (const auto& item : split(list, ',')) {
        if (item.empty()) continue;
        if (item == "mid") out.push_back(c_star(P) / 2.0);
        else out.push_back(parse_scaled(item, "cstar", c_star(P), "epsilon"));
    }
    if (out.empty()) throw UsageError("eps-list is empty");
    return out;
}

Json family_json(const RadialFamily& f) { return {{"c", f.c}, {"alpha", f.alpha}, {"beta", f.beta}, {"tau", f.tau}}; }

Json evidence_json(const std::vector<EvidencePoint>& ev) {
    Json a = Json::array();
    for (const auto& e : ev)
        a.push_back({{"r", e.r}, {"u", e.u}, {"du", e.du}, {"residual", e.residual}, {"scaled_residual", e.scaled}});
    return a;
}

Json classification_json(const ClassificationReport& c) {
    return {{"verdict", to_string(c.verdict)},
            {"rho0", std::isfinite(c.rho0) ? Json(c.rho0) : Json(nullptr)},
            {"strict", c.strict},
            {"max_abs_scaled", c.max_abs_scaled}};
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

Table evidence_table(const std::vector<EvidencePoint>& ev) {
    Table t{{"r", "u", "u'", "residual", "scaled_residual"}, {}};
    for (const auto& e : ev) t.rows.push_back({e.r, e.u, e.du, e.residual, e.scaled});
    return t;
}

Table trajectory_table(const Trajectory& tr) {
    Table t{{"r", "phi", "dphi", "flux", "local_exponent"}, {}};
    for (std::size_t i = 0; i < tr.size(); ++i)
        t.rows.push_back({tr.r[i], tr.phi[i], tr.dphi[i], tr.flux[i], tr.local_exponent[i]});
    return t;
}

Json trajectory_json(const Trajectory& tr) {
    Json nodes = Json::array();
    for (std::size_t i = 0; i < tr.size(); ++i)
        nodes.push_back({{"r", tr.r[i]},
                         {"phi", tr.phi[i]},
                         {"dphi", tr.dphi[i]},
                         {"flux", tr.flux[i]},
                         {"local_exponent", tr.local_exponent[i]}});
    Json j{{"stop", to_string(tr.stop)},
           {"monotone", to_string(tr.monotone)},
           {"accepted_steps", tr.accepted_steps},
           {"rejected_steps", tr.rejected_steps},
           {"r_end", tr.r_end()}};
    try {
        j["decay_exponent"] = decay_fit(tr);
    } catch (const Error&) {
        j["decay_exponent"] = nullptr;
    }
    j["nodes"] = std::move(nodes);
    return j;
}

/// What a subcommand hands back to the dispatcher.
struct Outcome {
    Json result = Json::object();
    std::optional<Table> table;
    int exit_code = kExitOk;
    std::string status = "ok";
};

/// Options shared by several subcommands; one instance per invocation.
struct Inputs {
    double p = 0.0;
    int N = 0;
    std::string potential = "zero";
    double r0 = 0.0;
    double R0 = std::numeric_limits<double>::infinity();
    double rmax = 1e6;
    int nodes = 512;
    double rho0_limit = std::numeric_limits<double>::infinity();
    double c = 1.0, alpha = 0.0, beta = 0.0, tau = 0.0;
    std::optional<double> lambda, epsilon;
    std::string eps_list = "0,mid,cstar";
    std::vector<double> radii;
    std::optional<double> q;
    double q_min = 1.0, q_max = 6.0;
    int samples = 100000;
    std::string u_spec, v_spec, w_spec, pair_spec, certificate, mode = "sub";
    double phi0 = 1.0, dphi0 = 0.0, tol = 1e-9, max_dt = 0.0, fixed_dt = 0.0;
    double inner = 1.0, outer = 0.0;
    bool growth = false;

    // global
    std::string format = "json";
    std::string output;
    std::uint64_t seed = 1;
    bool no_timestamp = false;
    double horizon = kDefaultHorizon;
};

Params params_of(const Inputs& in) { return Params(in.p, in.N); }

GridSpec grid_of(const Inputs& in) { return GridSpec{in.nodes, in.rmax, in.rho0_limit}; }

Outcome cmd_exponents(const Inputs& in) {
    const Params P = params_of(in);
    const auto hc = hardy_constants(P);
    Outcome o;
    Json& j = o.result;
    j["c_h"] = hc.c_h;
    j["c_star"] = hc.c_star;
    j["m_star"] = hc.m_star;
    Json deg = Json::object(), res = Json::object();
    j["alpha_lower"] = nullptr;
    j["alpha_upper"] = nullptr;
    j["beta_lower"] = nullptr;
    j["beta_upper"] = nullptr;
    if (in.lambda) {
        const auto h = hardy_roots(P, *in.lambda);
        j["alpha_lower"] = h.lower;
        j["alpha_upper"] = h.upper;
        deg["alpha"] = h.degenerate;
        res["alpha_lower"] = hardy_residual(P, h.lower, *in.lambda);
        res["alpha_upper"] = hardy_residual(P, h.upper, *in.lambda);
    }
    if (in.epsilon) {
        const auto b = improved_roots(P, *in.epsilon);
        j["beta_lower"] = b.lower;
        j["beta_upper"] = b.upper;
        deg["beta"] = b.degenerate;
        res["beta_lower"] = improved_residual(P, b.lower, *in.epsilon);
        res["beta_upper"] = improved_residual(P, b.upper, *in.epsilon);
    }
    j["degenerate"] = deg;
    j["residuals"] = res;
    return o;
}

Outcome cmd_classify(const Inputs& in) {
    const Params P = params_of(in);
    const RadialFamily u{in.c, in.alpha, in.beta, in.tau};
    u.validate();
    const auto V = parse_potential(in.potential, P);
    const double r0 = in.r0 > 0.0 ? in.r0 : std::max(2.0 * u.domain_min(), 1.0) + (u.tau != 0.0 ? 1.0 : 0.0);
    const auto rep = classify(P, u, V, Annulus{r0, in.R0}, grid_of(in));
    Outcome o;
    o.result = {{"family", family_json(u)}, {"potential", V.describe()}, {"r0", r0}};
    o.result.update(classification_json(rep));
    o.result["evidence"] = evidence_json(rep.evidence);
    o.table = evidence_table(rep.evidence);
    if (rep.verdict == Verdict::Neither) {
        o.exit_code = kExitInconclusive;
        o.status = "inconclusive";
    }
    return o;
}

Outcome cmd_table1(const Inputs& in) {
    const Params P = params_of(in);
    const auto rep = table1_suite(P, parse_eps_list(in.eps_list, P), in.nodes);
    Outcome o;
    Json cells = Json::array();
    Table t{{"epsilon", "beta", "tau", "expected_sub", "verdict_code", "rho0", "confirmed"}, {}};
    for (const auto& c : rep.cells) {
        cells.push_back({{"row", c.row},
                         {"column", c.column},
                         {"range", c.range},
                         {"epsilon", c.epsilon},
                         {"beta", c.beta},
                         {"tau", c.tau},
                         {"expected", to_string(c.expected)},
                         {"verdict", to_string(c.verdict)},
                         {"rho0", finite_or_null(c.rho0)},
                         {"strict", c.strict},
                         {"confirmed", c.confirmed},
                         {"error", c.error}});
        t.rows.push_back({c.epsilon, c.beta, c.tau, c.expected == Expectation::Subsolution ? 1.0 : 0.0,
                          static_cast<double>(static_cast<int>(c.verdict)), c.rho0, c.confirmed ? 1.0 : 0.0});
    }
    o.result = {{"r_start", rep.r_start},
                {"r_end", rep.r_end},
                {"rho0_limit", rep.rho0_limit},
                {"grid_nodes", rep.grid_nodes},
                {"all_confirmed", rep.all_confirmed()},
                {"cells", cells}};
    o.table = t;
    if (!rep.all_confirmed()) {
        o.exit_code = kExitInconclusive;
        o.status = "inconclusive";
    } else {
        o.status = "confirmed";
    }
    return o;
}

Outcome cmd_residual(const Inputs& in) {
    const Params P = params_of(in);
    const RadialFamily u{in.c, in.alpha, in.beta, in.tau};
    u.validate();
    const auto V = parse_potential(in.potential, P);
    std::vector<EvidencePoint> ev;
    for (double r : in.radii) {
        const Jet j = u.jet(r);
        const auto parts = residual_parts(P, j, V(P, r), r);
        ev.push_back({r, j.u, j.du, parts.residual, parts.scaled()});
    }
    Outcome o;
    o.result = {{"family", family_json(u)}, {"potential", V.describe()}, {"evidence", evidence_json(ev)}};
    o.table = evidence_table(ev);
    return o;
}

Outcome cmd_verify_inequality(const Inputs& in) {
    const double lo = in.q ? *in.q : in.q_min;
    const double hi = in.q ? *in.q : in.q_max;
    const auto rep = inequality_suite(lo, hi, in.samples, in.seed);
    Outcome o;
    o.result = {{"q_min", rep.q_min},
                {"q_max", rep.q_max},
                {"samples", rep.samples},
                {"sign_violations", rep.sign_violations},
                {"worst_sign_excess", rep.worst_sign_excess},
                {"equality_checked", rep.equality_checked},
                {"equality_violations", rep.equality_violations},
                {"strict_checked", rep.strict_checked},
                {"strict_violations", rep.strict_violations},
                {"passed", rep.passed()}};
    if (!rep.passed()) {
        o.exit_code = kExitRefuted;
        o.status = "violated";
    }
    return o;
}

Json difference_json(const DifferenceReport& d) {
    return {{"expected", to_string(d.expected)},
            {"holds", d.holds},
            {"violations", d.violations},
            {"degenerate_nodes", d.degenerate_nodes},
            {"worst_scaled", d.worst_scaled},
            {"worst_radius", d.worst_radius}};
}

Outcome cmd_verify_superposition(const Inputs& in) {
    const Params P = params_of(in);
    const auto V = parse_potential(in.potential, P);
    const double r0 = in.r0 > 0.0 ? in.r0 : 1.0;
    const Annulus ann{r0, std::isfinite(in.R0) ? in.R0 : 100.0 * r0};
    const GridSpec grid = grid_of(in);
    auto check = [&](const Profile& u, const Profile& v) {
        return in.mode == "super" ? supersolution_difference_check(P, u, v, V, ann, grid)
                                  : superposition_check(P, u, v, V, ann, grid);
    };
    if (in.mode != "sub" && in.mode != "super") throw UsageError("mode must be sub or super");

    Outcome o;
    o.result["mode"] = in.mode;
    o.result["annulus"] = {{"r0", ann.r0}, {"R0", ann.R0}};
    if (in.pair_spec.rfind("random:", 0) == 0) {
        // Hardy catalog pairs: u = r^alpha or r^bar alpha, v = s r^beta, beta interior.
        const auto* hardy = std::get_if<Potential::PureHardy>(&V.variant());
        if (!hardy) throw UsageError("random pairs need a hardy:<lambda> potential");
        const int n = static_cast<int>(parse_number(in.pair_spec.substr(7), "pair count"));
        if (n < 1) throw UsageError("pair count must be >= 1");
        const auto h = hardy_roots(P, hardy->lambda);
        std::mt19937_64 rng(in.seed);
        std::uniform_real_distribution<double> frac(0.1, 0.9);
        int violations = 0, holds = 0;
        Json worst = nullptr;
        double worst_scaled = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const Profile u = RadialFamily{1.0, (i % 2 == 0) ? h.lower : h.upper, 0.0, 0.0};
            const Profile vb = RadialFamily{1.0, h.lower + frac(rng) * (h.upper - h.lower), 0.0, 0.0};
            const double s = admissible_scale(u, vb, profile_grid(ann, grid, {u, vb}));
            const auto rep = check(u, vb.scaled(s));
            violations += rep.violations;
            holds += rep.holds ? 1 : 0;
            const double adverse = in.mode == "super" ? -rep.worst_scaled : rep.worst_scaled;
            if (adverse > worst_scaled) {
                worst_scaled = adverse;
                worst = {{"u", u.describe()}, {"v", vb.scaled(s).describe()}, {"report", difference_json(rep)}};
            }
        }
        o.result["pairs"] = n;
        o.result["pairs_holding"] = holds;
        o.result["violations"] = violations;
        o.result["worst_pair"] = worst;
        if (violations > 0) {
            o.exit_code = kExitRefuted;
            o.status = "violated";
        }
        return o;
    }

    std::string us = in.u_spec, vs = in.v_spec;
    if (!in.pair_spec.empty()) {
        const auto parts = split(in.pair_spec, ';');
        if (parts.size() != 2) throw UsageError("pair-spec must be random:<n> or <u-family>;<v-family>");
        us = parts[0];
        vs = parts[1];
    }
    if (us.empty() || vs.empty()) throw UsageError("give --pair-spec or both --u and --v");
    const RadialFamily u = parse_family(us, P), v = parse_family(vs, P);
    const auto rep = check(u, v);
    o.result["u"] = family_json(u);
    o.result["v"] = family_json(v);
    o.result.update(difference_json(rep));
    o.result["evidence"] = evidence_json(rep.evidence);
    o.table = evidence_table(rep.evidence);
    if (!rep.holds) {
        o.exit_code = kExitRefuted;
        o.status = "violated";
    }
    return o;
}

Outcome cmd_integrate(const Inputs& in) {
    const Params P = params_of(in);
    const auto V = parse_potential(in.potential, P);
    IntegrateOptions opts;
    opts.tol = in.tol;
    opts.max_dt = in.max_dt;
    opts.fixed_dt = in.fixed_dt;
    const double r0 = in.r0 > 0.0 ? in.r0 : 1.0;
    const auto tr = integrate(P, V, r0, in.phi0, in.dphi0, in.rmax, opts);
    Outcome o;
    o.result = {{"potential", V.describe()}, {"trajectory", trajectory_json(tr)}};
    o.table = trajectory_table(tr);
    return o;
}

Outcome cmd_pl_check(const Inputs& in) {
    const Params P = params_of(in);
    if (in.u_spec.empty() || in.w_spec.empty()) throw UsageError("pl-check needs --u and --w");
    const RadialFamily u = parse_family(in.u_spec, P), w = parse_family(in.w_spec, P);
    const double r0 = in.r0 > 0.0 ? in.r0 : 10.0;
    const double horizon = std::min(in.rmax, in.horizon);
    const auto d = pl_alternative(P, u, w, Annulus{r0, in.R0}, horizon, in.nodes);
    Outcome o;
    o.result = {{"u", family_json(u)},
                {"w", family_json(w)},
                {"trend", to_string(d.trend)},
                {"limsup_estimate", d.limsup_estimate},
                {"max_ratio", d.max_ratio},
                {"r1", finite_or_null(d.r1)},
                {"tail_log_slope", d.tail_log_slope},
                {"horizon", d.horizon},
                {"finite_horizon", d.finite_horizon},
                {"supports_domination", d.supports_domination},
                {"supports_non_smallness", d.supports_non_smallness}};
    Json ratios = Json::array();
    Table t{{"r", "ratio"}, {}};
    for (const auto& [r, q] : d.ratios) {
        ratios.push_back({r, q});
        t.rows.push_back({r, q});
    }
    o.result["ratios"] = ratios;
    o.table = t;
    if (d.trend == RatioTrend::Oscillating) {
        o.exit_code = kExitInconclusive;
        o.status = "inconclusive";
    }
    return o;
}

Outcome cmd_solve_bvp(const Inputs& in) {
    const Params P = params_of(in);
    const BvpProblem prob{P, parse_potential(in.potential, P), Annulus{in.r0 > 0.0 ? in.r0 : 1.0, in.R0}, in.inner,
                          in.outer};
    BvpOptions opts;
    opts.integrator_tol = std::min(in.tol, opts.integrator_tol);
    const auto sol = solve_bvp(prob, opts);
    Outcome o;
    o.result = {{"potential", prob.V.describe()},
                {"dphi0", sol.dphi0},
                {"boundary_residual", sol.boundary_residual},
                {"iterations", sol.iterations},
                {"trajectory", trajectory_json(sol.trajectory)}};
    o.table = trajectory_table(sol.trajectory);
    return o;
}

Outcome cmd_compare(const Inputs& in) {
    const Params P = params_of(in);
    if (in.u_spec.empty() || in.v_spec.empty()) throw UsageError("compare needs --u and --v");
    const RadialFamily u = parse_family(in.u_spec, P), v = parse_family(in.v_spec, P);
    const auto V = parse_potential(in.potential, P);
    const Annulus ann{in.r0 > 0.0 ? in.r0 : 1.0, in.R0};
    std::optional<RadialFamily> cert;
    if (!in.certificate.empty()) cert = parse_family(in.certificate, P);
    const auto rep = comparison_verify(P, V, ann, u, v, grid_of(in), cert);
    Outcome o;
    Json nodes = Json::array();
    for (const auto& [r, d] : rep.violation_nodes) nodes.push_back({r, d});
    o.result = {{"u", family_json(u)},
                {"v", family_json(v)},
                {"potential", V.describe()},
                {"u_verdict", to_string(rep.u_verdict)},
                {"v_verdict", to_string(rep.v_verdict)},
                {"certificate", {{"family", family_json(rep.certificate.w)}, {"origin", rep.certificate.origin}}},
                {"holds", rep.holds},
                {"violations", rep.violations},
                {"worst_excess", rep.worst_excess},
                {"worst_radius", rep.worst_radius},
                {"violation_nodes", nodes}};
    if (in.growth) try {
        const auto g = growth_dichotomy_check(P, V, u, v, ann, grid_of(in));
        Table t{{"r", "quotient"}, {}};
        for (const auto& [r, q] : g.quotient) t.rows.push_back({r, q});
        o.result["growth"] = {{"regime", to_string(g.regime)},
                              {"rho_star", finite_or_null(g.rho_star)},
                              {"non_increasing", g.non_increasing},
                              {"eventually_non_decreasing", g.eventually_non_decreasing}};
        o.table = t;
    } catch (const PreconditionError& e) {
        // Growth hypotheses (increasing pair, p >= 2) are stricter than comparison's.
        o.result["growth"] = {{"error", e.what()}, {"radius", finite_or_null(e.radius())}};
    }
    if (!rep.holds) {
        o.exit_code = kExitRefuted;
        o.status = "violated";
    }
    return o;
}

int exit_for(ErrorKind k) {
    switch (k) {
    case ErrorKind::DomainError:
    case ErrorKind::DegenerateDimension:
    case ErrorKind::DegenerateGradient:
    case ErrorKind::GradientDegenerate:
    case ErrorKind::PreconditionViolated: return kExitPrecondition;
    default: return kExitInconclusive;
    }
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) return "[" + std::to_string(v.size()) + " entries]";
    return v.dump();
}

// Dotted key paths of every non-array leaf.
void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    } else {
        out.emplace_back(prefix, scalar_text(j));
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string render(const Inputs& in, const Json& report, const std::optional<Table>& table) {
    std::ostringstream os;
    if (in.format == "json") {
        os << report.dump(2) << '\n';
    } else if (in.format == "csv") {
        if (table) {
            for (std::size_t i = 0; i < table->header.size(); ++i) os << (i ? "," : "") << table->header[i];
            os << '\n';
            os.precision(17);
            for (const auto& row : table->rows) {
                for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
                os << '\n';
            }
        } else {
            std::vector<std::pair<std::string, std::string>> kv;
            flatten(report, "", kv);
            os << "key,value\n";
            for (const auto& [k, v] : kv) os << csv_field(k) << ',' << csv_field(v) << '\n';
        }
    } else {
        std::vector<std::pair<std::string, std::string>> kv;
        flatten(report, "", kv);
        for (const auto& [k, v] : kv)
            if (k.rfind("config.", 0) != 0) os << k << ": " << v << '\n';
    }
    return os.str();
}

bool has_flag(const std::vector<std::string>& args, const std::string& key) {
    const std::string flag = "--" + key;
    for (const auto& a : args)
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
}

} // namespace

std::vector<std::string> merge_config(const std::vector<std::string>& args, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::vector<std::string> out = args;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
        if (key == "command") {
            // Only used when no subcommand was given on the command line.
            if (out.empty() || out.front().rfind("-", 0) == 0) out.insert(out.begin(), value);
            continue;
        }
        if (!has_flag(args, key)) out.push_back("--" + key + "=" + value);
    }
    return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    Inputs in;
    CLI::App app{"Radial p-Laplacian Hardy toolkit", "plhardy"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();

    std::string config_path;
    app.add_option("--config", config_path, "key = value file; command-line flags win");
    app.add_option("--out", in.format, "report format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--output", in.output, "write the report to this path instead of stdout");
    app.add_option("--seed", in.seed, "seed for randomized checks");
    app.add_flag("--no-timestamp", in.no_timestamp, "omit the timestamp so reports are byte-identical");
    app.add_option("--horizon", in.horizon, "largest radius for asymptotic scans")->check(CLI::PositiveNumber);

    std::map<CLI::App*, std::function<Outcome(const Inputs&)>> handlers;
    auto sub = [&](const char* name, const char* help, std::function<Outcome(const Inputs&)> fn) {
        CLI::App* s = app.add_subcommand(name, help);
        handlers[s] = std::move(fn);
        return s;
    };
    auto model = [&](CLI::App* s, bool with_potential = true) {
        s->add_option("--p", in.p, "p-Laplacian exponent")->required();
        s->add_option("--N", in.N, "dimension")->required();
        if (with_potential)
            s->add_option("--potential", in.potential, "zero | hardy:<x|ch|f*ch> | improved:<x|mid|cstar> | tabulated:<file>");
    };
    auto annulus = [&](CLI::App* s) {
        s->add_option("--r0", in.r0, "inner radius");
        s->add_option("--R0", in.R0, "outer radius (omit for the exterior domain)");
        s->add_option("--nodes", in.nodes, "grid nodes")->check(CLI::Range(kMinGridNodes, 1 << 22));
    };
    auto family = [&](CLI::App* s) {
        s->add_option("--c", in.c, "amplitude");
        s->add_option("--alpha", in.alpha, "power exponent");
        s->add_option("--beta", in.beta, "log exponent");
        s->add_option("--tau", in.tau, "log-log exponent");
    };

    auto* s_exp = sub("exponents", "critical constants and exponent roots", cmd_exponents);
    model(s_exp, false);
    s_exp->add_option("--lambda", in.lambda, "Hardy strength in [0, C_H]");
    s_exp->add_option("--epsilon", in.epsilon, "log-correction strength in [0, C*]");

    auto* s_cls = sub("classify", "sub/supersolution verdict for one family member", cmd_classify);
    model(s_cls);
    family(s_cls);
    annulus(s_cls);
    s_cls->add_option("--rmax", in.rmax, "grid end for the exterior domain");
    s_cls->add_option("--rho0-limit", in.rho0_limit, "rho0 beyond this counts as Neither");

    auto* s_tab = sub("table1", "sub/supersolution table of the log-corrected family", cmd_table1);
    model(s_tab, false);
    s_tab->add_option("--eps-list", in.eps_list, "comma list of 0, mid, cstar, f*cstar or numbers");
    s_tab->add_option("--nodes", in.nodes, "grid nodes")->check(CLI::Range(kMinGridNodes, 1 << 22));

    auto* s_res = sub("residual", "pointwise residual of one family member", cmd_residual);
    model(s_res);
    family(s_res);
    s_res->add_option("--r", in.radii, "radii")->required()->delimiter(',');

    auto* s_ineq = sub("verify-inequality", "randomized convexity inequality suite", cmd_verify_inequality);
    s_ineq->add_option("--q", in.q, "single exponent q > 0");
    s_ineq->add_option("--q-min", in.q_min, "lower end of the q range");
    s_ineq->add_option("--q-max", in.q_max, "upper end of the q range");
    s_ineq->add_option("--samples", in.samples, "number of quadruples")->check(CLI::PositiveNumber);

    auto* s_sup = sub("verify-superposition", "u - v for ordered sub/super pairs", cmd_verify_superposition);
    model(s_sup);
    annulus(s_sup);
    s_sup->add_option("--pair-spec", in.pair_spec, "random:<n> or <u-family>;<v-family>");
    s_sup->add_option("--u", in.u_spec, "u as c=..,alpha=..,beta=..,tau=..");
    s_sup->add_option("--v", in.v_spec, "v as c=..,alpha=..,beta=..,tau=..");
    s_sup->add_option("--mode", in.mode, "sub (p >= 2) or super (1 <= p <= 2)");

    auto* s_int = sub("integrate", "adaptive integration of the radial equation", cmd_integrate);
    model(s_int);
    s_int->add_option("--r0", in.r0, "start radius");
    s_int->add_option("--phi0", in.phi0, "phi(r0)");
    s_int->add_option("--dphi0", in.dphi0, "phi'(r0)");
    s_int->add_option("--rmax", in.rmax, "end radius");
    s_int->add_option("--tol", in.tol, "relative tolerance")->check(CLI::PositiveNumber);
    s_int->add_option("--max-dt", in.max_dt, "largest step in log r (0: span/64)");
    s_int->add_option("--fixed-dt", in.fixed_dt, "uniform step in log r, disables error control");

    auto* s_pl = sub("pl-check", "finite-horizon behaviour of u/w", cmd_pl_check);
    model(s_pl, false);
    s_pl->add_option("--u", in.u_spec, "u family")->required();
    s_pl->add_option("--w", in.w_spec, "w family")->required();
    s_pl->add_option("--r0", in.r0, "inner radius");
    s_pl->add_option("--R0", in.R0, "outer radius");
    s_pl->add_option("--rmax", in.rmax, "last sampled radius (capped by --horizon)");
    s_pl->add_option("--nodes", in.nodes, "samples")->check(CLI::Range(kMinGridNodes, 1 << 22));

    auto* s_bvp = sub("solve-bvp", "shooting solver for the two-point problem", cmd_solve_bvp);
    model(s_bvp);
    s_bvp->add_option("--r0", in.r0, "inner radius");
    s_bvp->add_option("--R0", in.R0, "outer radius")->required();
    s_bvp->add_option("--inner", in.inner, "phi(r0)")->required();
    s_bvp->add_option("--outer", in.outer, "phi(R0)")->required();
    s_bvp->add_option("--tol", in.tol, "integrator tolerance ceiling")->check(CLI::PositiveNumber);

    auto* s_cmp = sub("compare", "comparison principle on a bounded annulus", cmd_compare);
    model(s_cmp);
    annulus(s_cmp);
    s_cmp->add_option("--u", in.u_spec, "subsolution family")->required();
    s_cmp->add_option("--v", in.v_spec, "supersolution family")->required();
    s_cmp->add_option("--certificate", in.certificate, "strict supersolution witnessing condition (*)");
    s_cmp->add_flag("--growth", in.growth, "also run the growth dichotomy check");

    std::vector<std::string> args = raw_args;
    try {
        for (std::size_t i = 0; i < raw_args.size(); ++i) {
            std::string path;
            if (raw_args[i] == "--config" && i + 1 < raw_args.size()) path = raw_args[i + 1];
            else if (raw_args[i].rfind("--config=", 0) == 0) path = raw_args[i].substr(9);
            if (!path.empty()) args = merge_config(raw_args, path);
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        app.exit(e, err, err);
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    Json report;
    report["schema_version"] = kSchemaVersion;
    report["tool"] = "plhardy";
    report["subcommand"] = chosen->get_name();
    if (!in.no_timestamp) report["timestamp"] = utc_now();
    report["seed"] = in.seed;
    Json config = Json::object();
    for (CLI::App* a : {&app, chosen}) {
        for (const CLI::Option* opt : a->get_options()) {
            const std::string name = opt->get_single_name();
            if (name == "help" || name == "config") continue;
            config[name] = opt->count() > 0 ? opt->as<std::string>() : opt->get_default_str();
        }
    }
    report["config"] = config;

    Outcome o;
    try {
        o = handlers.at(chosen)(in);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PreconditionError& e) {
        o.exit_code = exit_for(e.kind());
        o.status = "error";
        o.result = Json::object();
        report["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}, {"radius", finite_or_null(e.radius())}};
    } catch (const Error& e) {
        o.exit_code = exit_for(e.kind());
        o.status = "error";
        o.result = Json::object();
        report["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    }
    report["status"] = o.status;
    report["exit_code"] = o.exit_code;
    report["result"] = o.result;

    const std::string text = render(in, report, o.status == "error" ? std::nullopt : o.table);
    if (in.output.empty()) {
        out << text;
    } else {
        std::ofstream f(in.output, std::ios::binary);
        if (!f) {
            err << "cannot write " << in.output << '\n';
            return kExitUsage;
        }
        f << text;
    }
    if (report.contains("error")) err << report["error"]["message"].get<std::string>() << '\n';
    return o.exit_code;
}

} // namespace plh::cli
