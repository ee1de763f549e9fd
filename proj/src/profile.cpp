#include "plh/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace plh {

const Trajectory* Profile::trajectory() const {
    const auto* p = std::get_if<std::shared_ptr<const Trajectory>>(&v_);
    return p ? p->get() : nullptr;
}

Jet Profile::jet(double r) const {
    if (const auto* f = family()) return f->jet(r);
    return trajectory()->jet(r);
}

double Profile::domain_min() const {
    if (const auto* f = family()) return f->domain_min();
    return trajectory()->r_begin();
}

double Profile::domain_max() const {
    if (family()) return std::numeric_limits<double>::infinity();
    return trajectory()->r_end();
}

bool Profile::contains(double r) const {
    if (const auto* f = family()) return r > f->domain_min() && std::isfinite(r);
    return r >= trajectory()->r_begin() && r <= trajectory()->r_end();
}

Profile Profile::scaled(double s) const {
    if (const auto* f = family()) return Profile(f->scaled(s));
    Trajectory t = *trajectory();
    for (auto& x : t.phi) x *= s;
    for (auto& x : t.dphi) x *= s;
    for (auto& x : t.d2phi) x *= s;
    t.finalize();
    return Profile(std::move(t));
}

std::string Profile::describe() const {
    std::ostringstream os;
    os.precision(12);
    if (const auto* f = family()) {
        os << "family(c=" << f->c << ", alpha=" << f->alpha << ", beta=" << f->beta << ", tau=" << f->tau << ")";
    } else {
        const auto* t = trajectory();
        os << "trajectory(" << t->size() << " nodes on [" << t->r_begin() << ", " << t->r_end() << "])";
    }
    return os.str();
}

ResidualParts residual_parts(const Params& params, const Profile& u, const Potential& V, double r) {
    return residual_parts(params, u.jet(r), V(params, r), r);
}

std::vector<double> profile_grid(const Annulus& ann, const GridSpec& grid, std::initializer_list<Profile> profiles) {
    ann.validate();
    if (grid.nodes < kMinGridNodes)
        fail(ErrorKind::DomainError, "grid needs at least " + std::to_string(kMinGridNodes) + " nodes");
    double end = ann.bounded() ? ann.R0 : grid.r_max;
    for (const auto& pr : profiles) {
        if (!pr.contains(ann.r0))
            fail(ErrorKind::DomainError, "inner radius " + std::to_string(ann.r0) + " outside the domain of " +
                                             pr.describe());
        end = std::min(end, pr.domain_max());
    }
    if (!(end > ann.r0)) fail(ErrorKind::DomainError, "grid end must exceed the inner radius");
    return geometric_grid(ann.r0, end, grid.nodes);
}

ClassificationReport classify(const Params& params, const Profile& u, const Potential& V, const Annulus& ann,
                              const GridSpec& grid) {
    if (const auto* f = u.family()) return classify(params, *f, V, ann, grid);
    const auto radii = profile_grid(ann, grid, {u});
    std::vector<EvidencePoint> ev;
    ev.reserve(radii.size());
    for (double r : radii) {
        const Jet j = u.jet(r);
        const auto parts = residual_parts(params, j, V(params, r), r);
        ev.push_back({r, j.u, j.du, parts.residual, parts.scaled()});
    }
    return classify_evidence(std::move(ev), grid.rho0_limit);
}

bool holds_on_whole_grid(const ClassificationReport& rep) {
    if (rep.evidence.empty()) return false;
    if (rep.verdict == Verdict::Solution) return true;
    if (rep.verdict != Verdict::Subsolution && rep.verdict != Verdict::Supersolution) return false;
    return rep.rho0 == rep.evidence.front().r;
}

} // namespace plh
