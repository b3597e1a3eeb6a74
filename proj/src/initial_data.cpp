#include "vortex/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace vortex {

namespace {

double get_param(const ParamMap& params, const std::string& key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void reject_unknown(const ParamMap& params, std::initializer_list<const char*> known,
                    const std::string& name) {
    for (const auto& [key, value] : params) {
        (void)value;
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* k) { return key == k; }) == known.end())
            throw std::invalid_argument("unknown parameter '" + key + "' for initial data '" + name + "'");
    }
}

} // namespace

InitialVorticity builtin_initial_data(const std::string& name, const ParamMap& params) {
    InitialVorticity iv;
    iv.name = name;
    if (name == "uniform_patch") {
        reject_unknown(params, {"radius", "strength", "center_x", "center_y"}, name);
        const double radius = get_param(params, "radius", 1.0);
        const double strength = get_param(params, "strength", 1.0);
        const Vec2 center{get_param(params, "center_x", 0.0), get_param(params, "center_y", 0.0)};
        if (!(radius > 0.0)) throw std::invalid_argument("uniform_patch: radius must be positive");
        if (strength < 0.0) throw std::invalid_argument("uniform_patch: strength must be nonnegative");
        iv.kind = InitialVorticity::Kind::area_density;
        iv.density = [=](Vec2 p) { return (p - center).norm2() <= radius * radius ? strength : 0.0; };
        iv.support_box = {center.x - radius, center.x + radius, center.y - radius, center.y + radius};
        return iv;
    }
    if (name == "gaussian_patch") {
        reject_unknown(params, {"amplitude"}, name);
        const double amplitude = get_param(params, "amplitude", 1.0);
        if (amplitude < 0.0) throw std::invalid_argument("gaussian_patch: amplitude must be nonnegative");
        constexpr double cutoff = 6.0; // density below 1e-15 outside
        iv.kind = InitialVorticity::Kind::area_density;
        iv.density = [=](Vec2 p) {
            const double r2 = p.norm2();
            return r2 <= cutoff * cutoff ? amplitude * std::exp(-r2) : 0.0;
        };
        iv.support_box = {-cutoff, cutoff, -cutoff, cutoff};
        return iv;
    }
    if (name == "flat_sheet") {
        reject_unknown(params, {"half_length", "density"}, name);
        const double half = get_param(params, "half_length", 1.0);
        const double dens = get_param(params, "density", 1.0);
        if (!(half > 0.0)) throw std::invalid_argument("flat_sheet: half_length must be positive");
        if (dens < 0.0) throw std::invalid_argument("flat_sheet: density must be nonnegative");
        iv.kind = InitialVorticity::Kind::sheet_curve;
        iv.curve = [=](double s) { return Vec2{-half + 2.0 * half * s, 0.0}; };
        iv.gamma_density = [=](double) { return dens * 2.0 * half; }; // per unit parameter
        iv.support_box = {-half, half, 0.0, 0.0};
        return iv;
    }
    if (name == "circular_sheet") {
        reject_unknown(params, {"radius", "density"}, name);
        const double radius = get_param(params, "radius", 1.0);
        const double dens = get_param(params, "density", 1.0);
        if (!(radius > 0.0)) throw std::invalid_argument("circular_sheet: radius must be positive");
        if (dens < 0.0) throw std::invalid_argument("circular_sheet: density must be nonnegative");
        iv.kind = InitialVorticity::Kind::sheet_curve;
        iv.curve = [=](double s) {
            const double th = 2.0 * M_PI * s;
            return Vec2{radius * std::cos(th), radius * std::sin(th)};
        };
        iv.gamma_density = [=](double) { return dens * 2.0 * M_PI * radius; };
        iv.support_box = {-radius, radius, -radius, radius};
        return iv;
    }
    throw std::invalid_argument("unknown initial data '" + name +
                                "' (available: uniform_patch, gaussian_patch, flat_sheet, circular_sheet)");
}

InitialVorticity density_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("density_from_file: cannot open '" + path + "'");
    std::vector<double> xs, ys, qs;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double x, y, q;
        if (ls >> x >> y >> q) {
            xs.push_back(x);
            ys.push_back(y);
            qs.push_back(q);
        }
    }
    if (qs.empty()) throw std::invalid_argument("density_from_file: no data rows in '" + path + "'");

    std::set<double> xset(xs.begin(), xs.end()), yset(ys.begin(), ys.end());
    std::vector<double> gx(xset.begin(), xset.end()), gy(yset.begin(), yset.end());
    const std::size_t nx = gx.size(), ny = gy.size();
    if (nx * ny != qs.size())
        throw std::invalid_argument("density_from_file: table is not a full grid");

    auto grid = std::make_shared<std::vector<double>>(nx * ny, 0.0);
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const std::size_t ix = static_cast<std::size_t>(
            std::lower_bound(gx.begin(), gx.end(), xs[i]) - gx.begin());
        const std::size_t iy = static_cast<std::size_t>(
            std::lower_bound(gy.begin(), gy.end(), ys[i]) - gy.begin());
        (*grid)[iy * nx + ix] = qs[i];
    }

    InitialVorticity iv;
    iv.name = "file:" + path;
    iv.kind = InitialVorticity::Kind::area_density;
    iv.support_box = {gx.front(), gx.back(), gy.front(), gy.back()};
    iv.nonnegative = *std::min_element(qs.begin(), qs.end()) >= 0.0;
    auto gxp = std::make_shared<std::vector<double>>(std::move(gx));
    auto gyp = std::make_shared<std::vector<double>>(std::move(gy));
    iv.density = [grid, gxp, gyp, nx, ny](Vec2 p) {
        const auto& X = *gxp;
        const auto& Y = *gyp;
        if (p.x < X.front() || p.x > X.back() || p.y < Y.front() || p.y > Y.back()) return 0.0;
        std::size_t i = static_cast<std::size_t>(
            std::upper_bound(X.begin(), X.end(), p.x) - X.begin());
        std::size_t j = static_cast<std::size_t>(
            std::upper_bound(Y.begin(), Y.end(), p.y) - Y.begin());
        i = std::clamp<std::size_t>(i, 1, nx - 1);
        j = std::clamp<std::size_t>(j, 1, ny - 1);
        const double tx = (p.x - X[i - 1]) / (X[i] - X[i - 1]);
        const double ty = (p.y - Y[j - 1]) / (Y[j] - Y[j - 1]);
        const auto& Q = *grid;
        const double q00 = Q[(j - 1) * nx + (i - 1)], q10 = Q[(j - 1) * nx + i];
        const double q01 = Q[j * nx + (i - 1)], q11 = Q[j * nx + i];
        return (1.0 - tx) * (1.0 - ty) * q00 + tx * (1.0 - ty) * q10 +
               (1.0 - tx) * ty * q01 + tx * ty * q11;
    };
    return iv;
}

} // namespace vortex
