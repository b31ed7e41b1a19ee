#include "affdim/error.hpp"
#include "affdim/geometry.hpp"
#include "affdim/parallel.hpp"
#include "affdim/sampling.hpp"
#include "affdim/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace affdim {
namespace {

Vec2 normal_of(double theta) { return {-std::sin(theta), std::cos(theta)}; }

std::vector<Vec2> spread_points(const Ifs& ifs, const AttractorExtent& ext, int count) {
    std::size_t depth = 1;
    while (std::pow(static_cast<double>(ifs.size()), static_cast<double>(depth)) < count && depth < 12) {
        ++depth;
    }
    const CylinderTable table(ifs, depth);
    std::vector<Vec2> out;
    const std::size_t n = table.size();
    const std::size_t want = std::min<std::size_t>(n, static_cast<std::size_t>(count));
    for (std::size_t k = 0; k < want; ++k) {
        out.push_back(table.map(k * n / want)(ext.seed()));
    }
    return out;
}

} // namespace

std::vector<double> grid_on_arcs(std::span<const ProjInterval> arcs, int count) {
    std::vector<double> out;
    if (arcs.empty() || count <= 0) {
        return out;
    }
    double total = 0.0;
    for (const auto& a : arcs) {
        total += a.width;
    }
    if (total <= 0.0) {
        for (int k = 0; k < count; ++k) {
            out.push_back(arcs[static_cast<std::size_t>(k) % arcs.size()].start);
        }
        return out;
    }
    for (int k = 0; k < count; ++k) {
        double pos = (k + 0.5) * total / count;
        for (const auto& a : arcs) {
            if (pos <= a.width) {
                out.push_back(reduce_angle(a.start + pos));
                break;
            }
            pos -= a.width;
        }
    }
    return out;
}

double posc_separation(const AttractorExtent& ext, const AffineMap& fi, const AffineMap& fj, double theta,
                       std::span<const Vec2> xs) {
    const Vec2 u = normal_of(theta);
    const double scale = std::max(ext.projected_width(fi.linear, u), ext.projected_width(fj.linear, u));
    if (scale <= 0.0) {
        return 0.0;
    }
    double best = 0.0;
    for (const auto& x : xs) {
        best = std::max(best, std::abs(dot(u, fi(x) - fj(x))));
    }
    return best / scale;
}

PoscReport posc_check(const Ifs& ifs, const PoscOptions& opt) {
    if (ifs.size() < 2) {
        throw PreconditionFailed("projective open set condition needs at least two maps");
    }
    const auto mats = ifs.matrices();
    auto cone = try_invariant_multicone(mats);
    if (!cone) {
        throw NotDominated();
    }
    const FurstenbergDirections dirs(mats, *cone);
    const auto approx = dirs.approx(opt.directions_depth);
    if (approx.singleton) {
        throw PreconditionFailed("Furstenberg directions look like a single point");
    }
    const AttractorExtent ext(ifs);
    const auto thetas = grid_on_arcs(approx.intervals, opt.v_grid);
    const auto xs = spread_points(ifs, ext, opt.x_samples);

    PoscReport rep;
    rep.per_depth.assign(static_cast<std::size_t>(opt.depth), INFINITY);
    struct Cell {
        double value = INFINITY;
        Word i, j;
    };
    std::vector<Cell> cells(thetas.size() * static_cast<std::size_t>(opt.depth));
    parallel::for_each_index(cells.size(), [&](std::size_t idx) {
        const double theta = thetas[idx / static_cast<std::size_t>(opt.depth)];
        const int k = static_cast<int>(idx % static_cast<std::size_t>(opt.depth)) + 1;
        const Vec2 u = normal_of(theta);
        const double r = ext.width(u) * std::ldexp(1.0, -k);
        StoppingOptions so;
        so.criterion = StoppingCriterion::ByProjectedDiameter;
        so.direction = theta;
        const auto stop = stopping_set(ifs, ext, r, so);
        std::vector<Interval1> iv(stop.size());
        std::vector<double> wid(stop.size());
        for (std::size_t a = 0; a < stop.size(); ++a) {
            iv[a] = ext.projected(stop.maps[a], u);
            wid[a] = ext.projected_width(stop.maps[a].linear, u);
        }
        Cell& cell = cells[idx];
        for (std::size_t a = 0; a < stop.size(); ++a) {
            for (std::size_t b = a + 1; b < stop.size(); ++b) {
                const double gap = std::max(iv[b].lo - iv[a].hi, iv[a].lo - iv[b].hi);
                const double scale = std::max(wid[a], wid[b]);
                if (gap > 0.0 && scale > 0.0 && gap / scale >= cell.value) {
                    continue;
                }
                const double sep = posc_separation(ext, stop.maps[a], stop.maps[b], theta, xs);
                if (sep < cell.value) {
                    cell.value = sep;
                    cell.i = stop.words[a];
                    cell.j = stop.words[b];
                }
            }
        }
    });
    rep.eta_hat = INFINITY;
    for (std::size_t idx = 0; idx < cells.size(); ++idx) {
        const auto k = idx % static_cast<std::size_t>(opt.depth);
        rep.per_depth[k] = std::min(rep.per_depth[k], cells[idx].value);
        if (cells[idx].value < rep.eta_hat) {
            rep.eta_hat = cells[idx].value;
            rep.witness_theta = thetas[idx / static_cast<std::size_t>(opt.depth)];
            rep.witness_i = cells[idx].i;
            rep.witness_j = cells[idx].j;
        }
    }
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(opt.depth);
    for (int k = 1; k <= opt.depth; ++k) {
        mx += k;
        my += std::log(std::max(rep.per_depth[static_cast<std::size_t>(k - 1)], 1e-300));
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int k = 1; k <= opt.depth; ++k) {
        const double y = std::log(std::max(rep.per_depth[static_cast<std::size_t>(k - 1)], 1e-300));
        sxx += (k - mx) * (k - mx);
        sxy += (k - mx) * (y - my);
    }
    rep.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    rep.appears_to_hold = rep.slope > opt.slope_threshold && rep.eta_hat > opt.floor;
    return rep;
}

SigmaCount sigma_count(const Ifs& ifs, const AttractorExtent& ext, double theta, Vec2 x, double r) {
    if (!(r > 0.0)) {
        throw InvalidInput("sigma count needs r > 0");
    }
    const Vec2 u = normal_of(theta);
    const double c = dot(u, x);
    const Interval1 ball{c - r, c + r};
    const Interval1 root = ext.projected(AffineMap::identity(), u);
    SigmaCount out;
    struct Frame {
        std::vector<int> letters;
        AffineMap map;
        Interval1 parent;
    };
    std::vector<Frame> stack;
    for (std::size_t i = ifs.size(); i-- > 0;) {
        stack.push_back({{static_cast<int>(i)}, ifs[i], root});
    }
    std::size_t visited = 0;
    const std::size_t cap = word_cap();
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (++visited > cap) {
            throw BudgetExceeded(cap);
        }
        Interval1 iv = ext.projected(f.map, u);
        iv.lo = std::max(iv.lo, f.parent.lo);
        iv.hi = std::min(iv.hi, f.parent.hi);
        if (iv.hi < iv.lo) {
            iv.hi = iv.lo;
        }
        if (iv.hi < ball.lo || iv.lo > ball.hi) {
            continue;
        }
        if (iv.length() < r) {
            out.words.emplace_back(std::move(f.letters));
            continue;
        }
        for (std::size_t i = ifs.size(); i-- > 0;) {
            auto child = f.letters;
            child.push_back(static_cast<int>(i));
            stack.push_back({std::move(child), f.map.compose(ifs[i]), iv});
        }
    }
    out.count = out.words.size();
    return out;
}

PointCloud slice_points(const PointCloud& cloud, double theta, Vec2 x, double tube_width) {
    const Vec2 u = normal_of(theta);
    const Vec2 v{std::cos(theta), std::sin(theta)};
    std::vector<Vec2> pts;
    for (const auto& p : cloud.points) {
        if (std::abs(dot(u, p - x)) <= tube_width) {
            pts.push_back({dot(v, p - x), 0.0});
        }
    }
    return PointCloud::from_points(std::move(pts), std::max(cloud.resolution, tube_width));
}

PointCloud slice_points(const Ifs& ifs, const AttractorExtent& ext, double theta, Vec2 x, double tube_width,
                        double resolution) {
    if (tube_width < 2.0 * resolution) {
        throw InvalidInput("tube width must be at least twice the resolution");
    }
    const auto cloud = attractor_sample(ifs, ext, resolution);
    return slice_points(cloud, theta, x, tube_width);
}

BochiMorrisReport bochi_morris_scan(std::span<const Matrix2> mats, int depth, int v_grid, int directions_depth) {
    auto cone = try_invariant_multicone(mats);
    if (!cone) {
        throw NotDominated();
    }
    const FurstenbergDirections dirs(mats, *cone);
    const auto approx = dirs.approx(affordable_depth(mats.size(), directions_depth));
    const auto thetas = grid_on_arcs(approx.intervals, v_grid);
    std::vector<Vec2> normals;
    for (double t : thetas) {
        normals.push_back(normal_of(t));
    }
    BochiMorrisReport rep;
    std::vector<Matrix2> level{Matrix2::identity()};
    for (int n = 1; n <= depth; ++n) {
        check_budget(static_cast<double>(level.size() * mats.size()));
        std::vector<Matrix2> next;
        next.reserve(level.size() * mats.size());
        for (const auto& w : level) {
            for (const auto& a : mats) {
                Matrix2 p = w * a;
                next.push_back(p * (1.0 / p.frobenius()));
            }
        }
        level = std::move(next);
        for (const auto& m : level) {
            const double a1 = singular_values(m).major;
            const Matrix2 t = m.transpose();
            for (const auto& u : normals) {
                const double restricted = (t * u).norm();
                ++rep.samples;
                if (restricted > a1 * (1.0 + 1e-12)) {
                    ++rep.left_violations;
                }
                rep.d = std::max(rep.d, a1 / restricted);
            }
        }
        rep.per_depth.push_back(rep.d);
    }
    return rep;
}

} // namespace affdim
