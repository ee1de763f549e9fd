#pragma once

#include <memory>
#include <string>
#include <variant>

#include "plh/family.hpp"
#include "plh/ode.hpp"

namespace plh {

/// A positive radial function given either in closed form or as an
/// integrated trajectory. Cheap to copy.
class Profile {
public:
    Profile(const RadialFamily& f) : v_(f) {}  // NOLINT: implicit by design
    Profile(Trajectory t) : v_(std::make_shared<const Trajectory>(std::move(t))) {}  // NOLINT

    Jet jet(double r) const;
    double value(double r) const { return jet(r).u; }

    /// Lower end of the domain. Open for families, closed for trajectories.
    double domain_min() const;
    double domain_max() const;
    bool contains(double r) const;

    bool is_family() const { return std::holds_alternative<RadialFamily>(v_); }
    const RadialFamily* family() const { return std::get_if<RadialFamily>(&v_); }
    const Trajectory* trajectory() const;

    /// Amplitude-scaled copy (trajectories are rescaled node by node).
    Profile scaled(double s) const;

    std::string describe() const;

private:
    std::variant<RadialFamily, std::shared_ptr<const Trajectory>> v_;
};

/// Residual at r for a profile.
ResidualParts residual_parts(const Params& params, const Profile& u, const Potential& V, double r);

/// Same semantics as `classify` for families, on any profile. The annulus
/// must lie inside the profile's domain.
ClassificationReport classify(const Params& params, const Profile& u, const Potential& V, const Annulus& ann,
                              const GridSpec& grid = {});

/// Grid covering [ann.r0, min(ann.R0 or grid.r_max, profile ends)].
std::vector<double> profile_grid(const Annulus& ann, const GridSpec& grid, std::initializer_list<Profile> profiles);

/// True when the report shows the sign holding from the first grid node
/// (the whole sampled annulus), as opposed to only beyond some rho0.
bool holds_on_whole_grid(const ClassificationReport& rep);

} // namespace plh
