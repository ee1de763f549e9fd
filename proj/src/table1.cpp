#include <algorithm>
#include <cmath>
#include <sstream>

#include "plh/family.hpp"

namespace plh {
namespace {

constexpr const char* kSub = "Subsolution";
constexpr const char* kSuper = "Supersolution";
constexpr const char* kSub2 = "Subsolution (upper)";

struct CellBuilder {
    std::string row;
    double epsilon;
    std::vector<Table1Cell> cells;

    void add(const char* column, std::string range, double beta, double tau, Expectation e,
             bool boundary = false) {
        Table1Cell c{};
        c.row = row;
        c.column = column;
        c.range = std::move(range);
        c.epsilon = epsilon;
        c.beta = beta;
        c.tau = tau;
        c.expected = e;
        c.boundary_point = boundary;
        c.verdict = Verdict::Neither;
        c.rho0 = std::numeric_limits<double>::infinity();
        cells.push_back(std::move(c));
    }
};

} // namespace

const char* to_string(Expectation e) {
    switch (e) {
    case Expectation::Subsolution: return "Subsolution";
    case Expectation::Supersolution: return "Supersolution";
    case Expectation::Unasserted: return "Unasserted";
    }
    return "?";
}

std::vector<Table1Cell> table1_cells(const Params& params, double epsilon) {
    const double p = params.p();
    const double cs = c_star(params);
    const auto roots = improved_roots(params, epsilon);
    const double lo = roots.lower;
    const double hi = roots.upper;
    constexpr double off = kUnboundedOffset;
    constexpr auto Sub = Expectation::Subsolution;
    constexpr auto Super = Expectation::Supersolution;

    if (params.critical_dimension()) {
        CellBuilder b{"p=N, eps in [0,C*]", epsilon, {}};
        b.add(kSub, "beta <= beta_eps, tau = 0", lo - off, 0.0, Sub);
        b.add(kSuper, "beta in [beta_eps, bar beta_eps], tau = 0", 0.5 * (lo + hi), 0.0, Super, roots.degenerate);
        b.add(kSub2, "beta >= bar beta_eps, tau = 0", hi + off, 0.0, Sub);
        if (roots.degenerate) {
            // log^{beta_eps} r (log log r)^tau at the critical strength.
            const double n = params.dim();
            b.row = "p=N, eps = C* (log-log correction)";
            b.add(kSuper, "beta = beta_eps, tau in (0, 2/N)", lo, 1.0 / n, Super);
            b.add(kSub2, "beta = beta_eps, tau > 2/N", lo, 2.0 / n + off, Expectation::Unasserted);
        }
        return b.cells;
    }

    const bool at_zero = epsilon == 0.0;
    const bool at_critical = roots.degenerate || std::fabs(epsilon - cs) <= kCriticalClampRel * cs;
    if (at_zero) {
        CellBuilder b{"p!=N, eps = 0", epsilon, {}};
        const double top = 2.0 / p;
        b.add(kSub, "beta <= 0, tau = 0", -off, 0.0, Sub);
        b.add(kSuper, "beta in [0, 2/p[, tau = 0", 0.1 * top, 0.0, Super);
        b.add(kSub2, "beta > 2/p, tau = 0", top + off, 0.0, Sub);
        b.add(kSub2, "beta = 2/p, tau > 0", top, off, Sub);
        return b.cells;
    }
    if (at_critical) {
        CellBuilder b{"p!=N, eps = C*", epsilon, {}};
        const double mid = 1.0 / p;
        b.add(kSub, "beta < 1/p, tau = 0", mid - off, 0.0, Sub);
        b.add(kSub, "beta = 1/p, tau < 0", mid, -off, Sub);
        b.add(kSuper, "beta = 1/p, tau in (0, 2/p)", mid, mid, Super);
        b.add(kSub2, "beta > 1/p, tau = 0", mid + off, 0.0, Sub);
        b.add(kSub2, "beta = 1/p, tau > 2/p", mid, 2.0 / p + off, Sub);
        b.add(kSuper, "beta = 1/p, tau = 0 (no table entry)", mid, 0.0, Expectation::Unasserted);
        return b.cells;
    }
    CellBuilder b{"p!=N, eps in (0,C*)", epsilon, {}};
    // tau pushing the exponent into (beta_eps, bar beta_eps) acts like a shift
    // of tau / log log r, so its size is tied to the interval width.
    const double inward = 0.5 * (hi - lo);
    b.add(kSub, "beta < beta_eps, tau = 0", lo - off, 0.0, Sub);
    b.add(kSub, "beta = beta_eps, tau < 0", lo, -off, Sub);
    b.add(kSuper, "beta in (beta_eps, bar beta_eps), tau = 0", 0.5 * (lo + hi), 0.0, Super);
    b.add(kSuper, "beta = beta_eps, tau > 0", lo, inward, Super);
    b.add(kSuper, "beta = bar beta_eps, tau < 0", hi, -inward, Super);
    b.add(kSub2, "beta > bar beta_eps, tau = 0", hi + off, 0.0, Sub);
    b.add(kSub2, "beta = bar beta_eps, tau > 0", hi, off, Sub);
    return b.cells;
}

bool Table1Report::all_confirmed() const {
    return std::all_of(cells.begin(), cells.end(), [](const Table1Cell& c) { return c.confirmed; });
}

Table1Report table1_suite(const Params& params, const std::vector<double>& epsilons, int grid_nodes) {
    Table1Report rep{params.p(), params.N(), kTable1RStart, kTable1REnd, kTable1RhoLimit, grid_nodes, {}};
    const Annulus ann{kTable1RStart};
    const GridSpec grid{grid_nodes, kTable1REnd, kTable1RhoLimit};

    for (double eps : epsilons) {
        std::vector<Table1Cell> cells;
        try {
            cells = table1_cells(params, eps);
        } catch (const Error& e) {
            Table1Cell c{};
            c.row = "invalid epsilon";
            c.epsilon = eps;
            c.expected = Expectation::Unasserted;
            c.verdict = Verdict::Neither;
            c.rho0 = std::numeric_limits<double>::infinity();
            c.error = e.what();
            rep.cells.push_back(std::move(c));
            continue;
        }
        const auto V = Potential::improved(eps);
        for (auto& c : cells) {
            const RadialFamily u{1.0, params.critical_alpha(), c.beta, c.tau};
            try {
                const auto cls = classify(params, u, V, ann, grid);
                c.verdict = cls.verdict;
                c.rho0 = cls.rho0;
                c.strict = cls.strict;
            } catch (const Error& e) {
                c.error = e.what();
            }
            switch (c.expected) {
            case Expectation::Unasserted: c.confirmed = c.error.empty(); break;
            case Expectation::Subsolution:
                c.confirmed = c.verdict == Verdict::Subsolution || (c.boundary_point && c.verdict == Verdict::Solution);
                break;
            case Expectation::Supersolution:
                c.confirmed =
                    c.verdict == Verdict::Supersolution || (c.boundary_point && c.verdict == Verdict::Solution);
                break;
            }
            c.confirmed = c.confirmed && c.error.empty();
            rep.cells.push_back(std::move(c));
        }
    }
    return rep;
}

} // namespace plh
