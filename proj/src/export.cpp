#include "hsurf/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hsurf/error.hpp"
#include "hsurf/phaseplane.hpp"

namespace hsurf {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(double v, const char* spec) {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const AmbientSpace& space, const PrescribedH& h,
                          const std::vector<AngularState>& samples) {
    out << "s,x,z,theta,nu,eps,H_residual\n";
    for (const auto& st : samples) {
        const double sn = std::sin(st.theta);
        const int eps = sn > 0.0 ? 1 : (sn < 0.0 ? -1 : 0);
        out << fmt17(st.s) << ',' << fmt17(st.x) << ',' << fmt17(st.z) << ',' << fmt17(st.theta) << ','
            << fmt17(nu_of(space, st)) << ',' << eps << ',' << fmt17(curvature_residual_at(space, h, st)) << '\n';
    }
}

nlohmann::ordered_json events_json(const std::vector<Event>& events) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& e : events) {
        nlohmann::ordered_json j;
        j["kind"] = std::string(to_string(e.kind));
        j["s"] = e.s;
        j["x"] = e.state.x;
        j["z"] = e.state.z;
        j["theta"] = e.state.theta;
        list.push_back(j);
    }
    return list;
}

std::vector<AngularState> read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Parse, "empty profile CSV");
    std::vector<std::string> cols;
    {
        std::stringstream hs(line);
        std::string c;
        while (std::getline(hs, c, ',')) cols.push_back(c);
    }
    auto index_of = [&](const std::string& name) {
        auto it = std::find(cols.begin(), cols.end(), name);
        if (it == cols.end()) fail(ErrorKind::Parse, "profile CSV lacks column " + name);
        return static_cast<std::size_t>(it - cols.begin());
    };
    const std::size_t is = index_of("s"), ix = index_of("x"), iz = index_of("z"), it = index_of("theta");
    std::vector<AngularState> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) {
            try {
                vals.push_back(std::stod(c));
            } catch (const std::exception&) {
                fail(ErrorKind::Parse, "bad number in profile CSV: " + c);
            }
        }
        if (vals.size() < cols.size()) fail(ErrorKind::Parse, "short row in profile CSV");
        out.push_back({vals[is], vals[ix], vals[iz], vals[it]});
    }
    return out;
}

int Mesh::euler_characteristic() const {
    std::map<std::pair<int, int>, int> edges;
    for (const auto& f : faces)
        for (int k = 0; k < 3; ++k) {
            const int a = f[k], b = f[(k + 1) % 3];
            ++edges[{std::min(a, b), std::max(a, b)}];
        }
    return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) + static_cast<int>(faces.size());
}

bool Mesh::watertight() const {
    std::map<std::pair<int, int>, int> edges;
    for (const auto& f : faces)
        for (int k = 0; k < 3; ++k) {
            const int a = f[k], b = f[(k + 1) % 3];
            ++edges[{std::min(a, b), std::max(a, b)}];
        }
    return std::all_of(edges.begin(), edges.end(), [](const auto& e) { return e.second == 2; });
}

Mesh revolve(const Profile& profile, int angular_res, MeshTopology topology) {
    const int m = std::max(angular_res, 3);
    std::vector<AngularState> ring_pts;
    std::optional<AngularState> cap_start, cap_end;
    const auto& pts = profile.points;
    if (pts.size() < 2) fail(ErrorKind::Domain, "profile needs at least two points");
    const double axis_tol = 1e-4;
    std::size_t first = 0, last = pts.size();
    bool axis_ends = profile.axis_ends || (pts.front().x < axis_tol && pts.back().x < axis_tol);
    if (topology == MeshTopology::Sphere && !axis_ends) fail(ErrorKind::Domain, "sphere mesh needs axis end points");
    if (topology == MeshTopology::Torus && !profile.closed_loop)
        fail(ErrorKind::Domain, "torus mesh requested for an open profile");
    if (topology == MeshTopology::Tube) axis_ends = false;
    const bool loop = profile.closed_loop && topology != MeshTopology::Tube && topology != MeshTopology::Sphere;
    if (axis_ends) {
        cap_start = pts.front();
        cap_end = pts.back();
        first = 1;
        last = pts.size() - 1;
    }
    for (std::size_t i = first; i < last; ++i) ring_pts.push_back(pts[i]);
    if (ring_pts.empty()) fail(ErrorKind::Domain, "profile has no off-axis points");

    Mesh mesh;
    for (const auto& p : ring_pts) {
        for (int j = 0; j < m; ++j) {
            const double phi = 2.0 * kPi * j / m;
            mesh.vertices.push_back({p.x * std::cos(phi), p.x * std::sin(phi), p.z});
        }
    }
    const int n = static_cast<int>(ring_pts.size());
    auto vid = [m](int ring, int j) { return ring * m + ((j % m) + m) % m; };
    const int ring_pairs = loop ? n : n - 1;
    for (int i = 0; i < ring_pairs; ++i) {
        const int a = i, b = (i + 1) % n;
        for (int j = 0; j < m; ++j) {
            mesh.faces.push_back({vid(a, j), vid(b, j), vid(b, j + 1)});
            mesh.faces.push_back({vid(a, j), vid(b, j + 1), vid(a, j + 1)});
        }
    }
    if (axis_ends) {
        const int top = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back({0.0, 0.0, cap_start->z});
        const int bottom = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back({0.0, 0.0, cap_end->z});
        for (int j = 0; j < m; ++j) {
            mesh.faces.push_back({top, vid(0, j + 1), vid(0, j)});
            mesh.faces.push_back({bottom, vid(n - 1, j), vid(n - 1, j + 1)});
        }
    }
    mesh.closed = axis_ends || loop;
    return mesh;
}

void write_obj(std::ostream& out, const Mesh& mesh, const std::optional<AmbientSpace>& berger) {
    out << "# revolved profile mesh\n";
    out << "# vertices " << mesh.vertices.size() << " faces " << mesh.faces.size() << " euler "
        << mesh.euler_characteristic() << "\n";
    for (const auto& v : mesh.vertices) {
        out << "v " << fmt(v[0], "%.12g") << ' ' << fmt(v[1], "%.12g") << ' ' << fmt(v[2], "%.12g") << '\n';
        if (berger) {
            const auto q = berger->berger_embed(v[0], v[1], v[2]);
            out << "# berger " << fmt(q[0], "%.12g") << ' ' << fmt(q[1], "%.12g") << ' ' << fmt(q[2], "%.12g") << ' '
                << fmt(q[3], "%.12g") << '\n';
        }
    }
    for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

PhasePlotOrbit project_orbit(const AmbientSpace& space, const Trajectory& traj, Eps eps) {
    PhasePlotOrbit orbit;
    const double n = 2000.0;
    const double a = traj.s_begin(), b = traj.s_end();
    bool last_nan = true;
    for (int i = 0; i <= 2000; ++i) {
        const auto st = traj.at(a + (b - a) * i / n);
        const double sn = std::sin(st.theta);
        if ((sn > 0.0) == (eps == Eps::Plus) && sn != 0.0) {
            orbit.points.push_back({st.x, nu_of(space, st)});
            last_nan = false;
        } else if (!last_nan) {
            orbit.points.push_back({NAN, NAN});
            last_nan = true;
        }
    }
    return orbit;
}

namespace {

struct Canvas {
    double x0 = 0.0, x1 = 1.0, y0 = -1.05, y1 = 1.05;
    double width = 800.0, height = 600.0, margin = 50.0;
    double px(double x) const { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); }
    double py(double y) const { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); }
    std::string pt(double x, double y) const { return fmt(px(x), "%.2f") + "," + fmt(py(y), "%.2f"); }
};

void emit_polylines(std::ostringstream& svg, const Canvas& c, const std::vector<std::array<double, 2>>& pts,
                    const char* cls, const char* color, double width) {
    std::vector<std::string> run;
    auto flush = [&]() {
        if (run.size() >= 2) {
            svg << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
                << fmt(width, "%.1f") << "\" points=\"";
            for (std::size_t i = 0; i < run.size(); ++i) svg << (i ? " " : "") << run[i];
            svg << "\"/>\n";
        }
        run.clear();
    };
    for (const auto& p : pts) {
        if (std::isnan(p[0]) || p[0] < c.x0 || p[0] > c.x1) {
            flush();
            continue;
        }
        run.push_back(c.pt(p[0], p[1]));
    }
    flush();
}

}  // namespace

std::string phase_plot_svg(const PhasePlotInput& in) {
    const auto& space = in.space;
    const auto e_up = equilibrium(space, in.h, Eps::Plus);
    const auto e_down = equilibrium(space, in.h, Eps::Minus);
    double extent = 1.0 / std::max(1e-9, in.h.eval(0.0));
    if (e_up) extent = std::max(extent, e_up->x);
    if (e_down) extent = std::max(extent, e_down->x);
    for (const auto& o : in.orbits)
        for (const auto& p : o.points)
            if (std::isfinite(p[0])) extent = std::max(extent, p[0]);
    double x_hi = in.x_max.value_or(extent * 1.5);
    if (auto wall = space.wall_radius()) x_hi = std::min(x_hi, *wall);
    Canvas c;
    c.x1 = in.x_max ? x_hi : x_hi * 1.05;

    // fixed palette
    const char* kOmega = "#1f77b4";
    const char* kGamma = "#d62728";
    const char* kOrbit = "#2ca02c";
    const char* kGlyph = "#7f7f7f";
    const char* kEquilibrium = "#9467bd";

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
    svg << "<desc>phase plane eps=" << sign_of(in.eps) << " kappa=" << fmt(space.kappa(), "%.6g")
        << " tau=" << fmt(space.tau(), "%.6g") << "</desc>\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    svg << "<line class=\"axis\" x1=\"" << fmt(c.px(0), "%.2f") << "\" y1=\"" << fmt(c.py(0), "%.2f") << "\" x2=\""
        << fmt(c.px(c.x1), "%.2f") << "\" y2=\"" << fmt(c.py(0), "%.2f") << "\" stroke=\"black\"/>\n";
    svg << "<line class=\"axis\" x1=\"" << fmt(c.px(0), "%.2f") << "\" y1=\"" << fmt(c.py(c.y0), "%.2f")
        << "\" x2=\"" << fmt(c.px(0), "%.2f") << "\" y2=\"" << fmt(c.py(c.y1), "%.2f") << "\" stroke=\"black\"/>\n";
    if (auto wall = space.wall_radius(); wall && *wall <= c.x1) {
        svg << "<line class=\"wall\" x1=\"" << fmt(c.px(*wall), "%.2f") << "\" y1=\"" << fmt(c.py(c.y0), "%.2f")
            << "\" x2=\"" << fmt(c.px(*wall), "%.2f") << "\" y2=\"" << fmt(c.py(c.y1), "%.2f")
            << "\" stroke=\"black\" stroke-dasharray=\"4 4\"/>\n";
    }

    const int n = 400;
    for (int sgn : {1, -1}) {
        std::vector<std::array<double, 2>> pts;
        for (int i = 0; i <= n; ++i) {
            const double x = c.x1 * i / n;
            pts.push_back({x, sgn * omega_height(space, x)});
        }
        emit_polylines(svg, c, pts, "omega", kOmega, 1.5);
    }

    std::vector<std::array<double, 2>> gamma_pts;
    const int ng = 2000;
    for (int i = 1; i < ng; ++i) {
        const double y = -1.0 + 2.0 * i / ng;
        if (auto g = gamma_curve(space, in.h, in.eps, y)) gamma_pts.push_back({*g, y});
        else gamma_pts.push_back({NAN, NAN});
    }
    emit_polylines(svg, c, gamma_pts, "gamma", kGamma, 1.5);

    for (const auto& o : in.orbits) emit_polylines(svg, c, o.points, "orbit", kOrbit, 1.0);

    const int gx = 16, gy = 11;
    for (int i = 1; i < gx; ++i) {
        for (int j = 1; j < gy; ++j) {
            const double x = c.x1 * i / gx;
            const double y = -1.0 + 2.0 * j / gy;
            if (!space.in_domain(x) || !(y * y < 1.0 / (1.0 + space.tau() * space.tau() * x * x))) continue;
            const auto r = region_classify(space, in.h, {x, y, in.eps});
            const double dx = 7.0 * r.sign_dx_ds;
            const double dy = -7.0 * r.sign_dy_ds;
            const double cx = c.px(x), cy = c.py(y);
            svg << "<path class=\"glyph\" stroke=\"" << kGlyph << "\" fill=\"none\" d=\"M" << fmt(cx, "%.2f") << ","
                << fmt(cy, "%.2f") << " l" << fmt(dx, "%.1f") << ",0 M" << fmt(cx, "%.2f") << "," << fmt(cy, "%.2f")
                << " l0," << fmt(dy, "%.1f") << "\"/>\n";
        }
    }

    const auto marked = in.eps == Eps::Plus ? e_up : e_down;
    if (marked && marked->x <= c.x1) {
        svg << "<circle class=\"equilibrium\" cx=\"" << fmt(c.px(marked->x), "%.2f") << "\" cy=\""
            << fmt(c.py(0.0), "%.2f") << "\" r=\"4\" fill=\"" << kEquilibrium << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace hsurf
