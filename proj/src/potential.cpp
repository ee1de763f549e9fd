#include <algorithm>
#include <cmath>
#include <sstream>

#include "plh/family.hpp"

namespace plh {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

} // namespace

Potential Potential::hardy(double lambda) {
    if (!(std::isfinite(lambda) && lambda >= 0.0))
        fail(ErrorKind::DomainError, "Hardy strength must be finite and >= 0");
    return Potential(PureHardy{lambda});
}

Potential Potential::improved(double epsilon) {
    if (!(std::isfinite(epsilon) && epsilon >= 0.0))
        fail(ErrorKind::DomainError, "improved-Hardy epsilon must be finite and >= 0");
    return Potential(ImprovedHardy{epsilon});
}

Potential Potential::tabulated(std::vector<double> nodes, std::vector<double> values) {
    if (nodes.size() != values.size() || nodes.size() < 2)
        fail(ErrorKind::DomainError, "tabulated potential needs >= 2 nodes and matching values");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!(std::isfinite(nodes[i]) && nodes[i] > 0.0))
            fail(ErrorKind::DomainError, "tabulated potential nodes must be positive radii");
        if (i > 0 && !(nodes[i] > nodes[i - 1]))
            fail(ErrorKind::DomainError, "tabulated potential nodes must be strictly increasing");
        if (!(std::isfinite(values[i]) && values[i] >= 0.0))
            fail(ErrorKind::DomainError, "tabulated potential values must be >= 0");
    }
    return Potential(Tabulated{std::move(nodes), std::move(values)});
}

double Potential::operator()(const Params& params, double r) const {
    return std::visit(
        overloaded{
            [](const Zero&) { return 0.0; },
            [&](const PureHardy& h) { return h.lambda / std::pow(r, params.p()); },
            [&](const ImprovedHardy& h) {
                if (!(r > 1.0)) fail(ErrorKind::DomainError, "improved-Hardy potential needs r > 1");
                const double rp = std::pow(r, params.p());
                const double lg = std::log(r);
                return critical_hardy(params) / rp + h.epsilon / (rp * std::pow(lg, params.log_power()));
            },
            [&](const Tabulated& t) {
                if (r < t.nodes.front() || r > t.nodes.back())
                    fail(ErrorKind::DomainError, "radius outside the tabulated potential range");
                const auto it = std::upper_bound(t.nodes.begin(), t.nodes.end(), r);
                if (it == t.nodes.end()) return t.values.back();
                const auto i = static_cast<std::size_t>(it - t.nodes.begin());
                const double w = (r - t.nodes[i - 1]) / (t.nodes[i] - t.nodes[i - 1]);
                return (1.0 - w) * t.values[i - 1] + w * t.values[i];
            },
        },
        v_);
}

double Potential::domain_min() const {
    if (std::holds_alternative<ImprovedHardy>(v_)) return 1.0;
    if (const auto* t = std::get_if<Tabulated>(&v_)) return t->nodes.front();
    return 0.0;
}

double Potential::domain_max() const {
    if (const auto* t = std::get_if<Tabulated>(&v_)) return t->nodes.back();
    return std::numeric_limits<double>::infinity();
}

bool Potential::is_zero() const {
    return std::visit(overloaded{
                          [](const Zero&) { return true; },
                          [](const PureHardy& h) { return h.lambda == 0.0; },
                          [](const ImprovedHardy&) { return false; },
                          [](const Tabulated& t) {
                              return std::all_of(t.values.begin(), t.values.end(),
                                                 [](double v) { return v == 0.0; });
                          },
                      },
                      v_);
}

std::string Potential::describe() const {
    return std::visit(overloaded{
                          [](const Zero&) { return std::string("zero"); },
                          [](const PureHardy& h) { return "hardy:" + fmt_double(h.lambda); },
                          [](const ImprovedHardy& h) { return "improved:" + fmt_double(h.epsilon); },
                          [](const Tabulated& t) { return "tabulated:" + std::to_string(t.nodes.size()); },
                      },
                      v_);
}

} // namespace plh
