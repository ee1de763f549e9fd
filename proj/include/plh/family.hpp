#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "plh/exponents.hpp"
#include "plh/params.hpp"

namespace plh {

/// Value and first two radial derivatives of a radial function at one radius.
struct Jet {
    double u;
    double du;
    double d2u;
};

/// u(r) = c r^alpha (log r)^beta (log log r)^tau.
///
/// The log factor needs r > 1 when beta != 0 and the log-log factor r > e
/// when tau != 0; pure powers are defined on r > 0.
struct RadialFamily {
    double c = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    double tau = 0.0;

    /// Throws DomainError unless c > 0 and all exponents are finite.
    void validate() const;

    /// Infimum of the open domain of definition (0, 1 or e).
    double domain_min() const;

    /// log u(r); finite wherever the family is defined.
    double log_value(double r) const;

    /// u r / u: logarithmic derivative d log u / d log r.
    double log_slope(double r) const;

    /// Closed-form u, u', u''. Throws DomainError outside the domain.
    Jet jet(double r) const;

    RadialFamily scaled(double s) const { return {c * s, alpha, beta, tau}; }
};

/// Nonnegative radial potential V(r).
class Potential {
public:
    struct Zero {};
    struct PureHardy {
        double lambda;
    };
    struct ImprovedHardy {
        double epsilon;
    };
    struct Tabulated {
        std::vector<double> nodes;
        std::vector<double> values;
    };
    using Variant = std::variant<Zero, PureHardy, ImprovedHardy, Tabulated>;

    Potential() = default;
    static Potential zero() { return Potential(Zero{}); }
    static Potential hardy(double lambda);
    static Potential improved(double epsilon);
    /// Linear interpolation of values on strictly increasing nodes.
    static Potential tabulated(std::vector<double> nodes, std::vector<double> values);

    /// V(r); the improved potential uses C_H and m_* of `params`.
    double operator()(const Params& params, double r) const;

    /// Smallest radius where V is defined (1 for the improved potential,
    /// first node for tables, 0 otherwise).
    double domain_min() const;
    double domain_max() const;

    bool is_zero() const;
    const Variant& variant() const { return v_; }

    /// "zero", "hardy:<lambda>", "improved:<eps>" or "tabulated:<n>".
    std::string describe() const;

private:
    explicit Potential(Variant v) : v_(std::move(v)) {}
    Variant v_ = Zero{};
};

/// Radial annulus r0 < |x| < R0 with R0 possibly infinite.
struct Annulus {
    double r0;
    double R0 = std::numeric_limits<double>::infinity();

    void validate() const;
    bool bounded() const { return std::isfinite(R0); }
};

/// Sampling grid over an annulus: geometric spacing from r0 to R0 (or to
/// `r_max` when the annulus is unbounded).
struct GridSpec {
    int nodes = 512;
    double r_max = 1e6;
    /// Detected rho0 beyond this radius turns a signed verdict into Neither.
    double rho0_limit = std::numeric_limits<double>::infinity();
};

inline constexpr int kMinGridNodes = 64;

/// |residual| <= kDeadBand * scale counts as zero.
inline constexpr double kDeadBand = 1e-9;

/// Number of trailing nodes that must share a sign for a signed verdict.
inline constexpr int kMinUniformTail = 8;

std::vector<double> geometric_grid(double r0, double r1, int nodes);

/// Grid over `ann` per `spec`; throws DomainError for fewer than 64 nodes.
std::vector<double> annulus_grid(const Annulus& ann, const GridSpec& spec);

struct ResidualParts {
    double residual;  ///< -|u'|^{p-2} L(u) - V u^{p-1}
    double scale;     ///< |u'|^{p-2}((p-1)|u''| + (N-1)|u'|/r) + V u^{p-1} + 1e-300
    double scaled() const { return residual / scale; }
};

/// (p-1) u'' + ((N-1)/r) u'.
double radial_L(const Params& params, const Jet& jet, double r);
double radial_L(const Params& params, const RadialFamily& u, double r);

/// Residual of -Delta_p u - V u^{p-1} for a positive radial jet with V(r)
/// already evaluated. Throws DegenerateGradient when |u'| < 1e-300 and p != 2.
ResidualParts residual_parts(const Params& params, const Jet& jet, double v_at_r, double r);

ResidualParts residual_parts(const Params& params, const RadialFamily& u, const Potential& V, double r);
double residual(const Params& params, const RadialFamily& u, const Potential& V, double r);

enum class Verdict { Subsolution, Supersolution, Solution, Neither, MixedSign };
const char* to_string(Verdict v);

struct EvidencePoint {
    double r;
    double u;
    double du;
    double residual;
    double scaled;
};

struct ClassificationReport {
    Verdict verdict;
    /// First node of the longest uniformly signed suffix; +inf for MixedSign.
    double rho0;
    /// Every scaled residual on the suffix lies outside the dead-band.
    bool strict;
    double max_abs_scaled;
    std::vector<EvidencePoint> evidence;
};

/// Verdict from an already sampled evidence grid.
ClassificationReport classify_evidence(std::vector<EvidencePoint> evidence, double rho0_limit);

/// Samples the residual of `u` on the annulus grid and classifies its sign.
ClassificationReport classify(const Params& params, const RadialFamily& u, const Potential& V,
                              const Annulus& ann, const GridSpec& grid = {});

// ---------------------------------------------------------------------------
// Table of sub/supersolution properties of r^{(p-N)/p} log^beta log log^tau.

enum class Expectation { Subsolution, Supersolution, Unasserted };
const char* to_string(Expectation e);

struct Table1Cell {
    std::string row;      ///< e.g. "p!=N, eps in (0,C*)"
    std::string column;   ///< Subsolution / Supersolution / Subsolution (second)
    std::string range;    ///< parameter range of the cell as text
    double epsilon;
    double beta;
    double tau;
    Expectation expected;
    /// Representative sits on a closed end of its range, so an exact
    /// solution also confirms the cell.
    bool boundary_point;
    Verdict verdict;
    double rho0;
    bool strict;
    bool confirmed;
    std::string error;  ///< non-empty when classification threw
};

struct Table1Report {
    double p;
    int N;
    double r_start;
    double r_end;
    double rho0_limit;
    int grid_nodes;
    std::vector<Table1Cell> cells;
    bool all_confirmed() const;
};

inline constexpr double kTable1RhoLimit = 1e4;
inline constexpr double kTable1REnd = 1e6;
inline constexpr double kTable1RStart = 3.0;
/// Offset from the endpoint for unbounded parameter ranges.
inline constexpr double kUnboundedOffset = 0.5;

/// Cells of the table for one epsilon: one representative (beta, tau) per cell.
std::vector<Table1Cell> table1_cells(const Params& params, double epsilon);

/// Classifies every representative for each epsilon in `epsilons`.
/// Per-cell failures are recorded, never thrown.
Table1Report table1_suite(const Params& params, const std::vector<double>& epsilons, int grid_nodes = 512);

} // namespace plh
