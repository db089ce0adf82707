#include "hqc/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hqc {

GridField::GridField(const BoxDomain& dom, const GridDims& dims, double exterior_k)
    : dom_(dom),
      nx_(dims.nx),
      ny_(dims.ny),
      nz_(dims.nz),
      exterior_k_(exterior_k) {
    if (!dom.valid()) throw std::invalid_argument("GridField: domain lo must be < hi componentwise");
    if (nx_ < 2 || ny_ < 2 || nz_ < 2)
        throw std::invalid_argument("GridField: need at least 2 nodes per axis");
    hx_ = (dom.hi.x - dom.lo.x) / (nx_ - 1);
    hy_ = (dom.hi.y - dom.lo.y) / (ny_ - 1);
    hz_ = (dom.hi.z - dom.lo.z) / (nz_ - 1);
    values_.assign(static_cast<std::size_t>(nx_) * ny_ * nz_, 0.0);
}

double GridField::min_spacing() const { return std::min({hx_, hy_, hz_}); }
double GridField::max_spacing() const { return std::max({hx_, hy_, hz_}); }

Point GridField::node(std::size_t idx) const {
    const std::size_t plane = static_cast<std::size_t>(nx_) * ny_;
    const int k = static_cast<int>(idx / plane);
    const std::size_t r = idx % plane;
    const int j = static_cast<int>(r / nx_);
    const int i = static_cast<int>(r % nx_);
    return node(i, j, k);
}

bool GridField::well_interior(const Point& p) const {
    return p.x >= dom_.lo.x + hx_ && p.x <= dom_.hi.x - hx_ &&
           p.y >= dom_.lo.y + hy_ && p.y <= dom_.hi.y - hy_ &&
           p.z >= dom_.lo.z + hz_ && p.z <= dom_.hi.z - hz_;
}

GridField build_field(const BoxDomain& dom, const GridDims& dims,
                      const Generator& gen, double exterior_k, bool clip_to_k) {
    GridField f(dom, dims, exterior_k);
    for (int k = 0; k < f.nz(); ++k)
        for (int j = 0; j < f.ny(); ++j)
            for (int i = 0; i < f.nx(); ++i) {
                double v = gen(f.node(i, j, k));
                if (!std::isfinite(v))
                    throw std::runtime_error("build_field: generator produced a non-finite value");
                if (clip_to_k && v > exterior_k) v = exterior_k;
                f.at(i, j, k) = v;
            }
    return f;
}

HorizGrad horiz_grad(const GridField& f, const Point& p) {
    const BoxDomain& d = f.domain();
    const double hx = f.hx(), hy = f.hy(), hz = f.hz();
    HorizGrad g;

    auto diff = [&f, &g](const Point& c, double h, int axis) {
        Point a = c, b = c;
        double* pa = axis == 0 ? &a.x : axis == 1 ? &a.y : &a.z;
        double* pb = axis == 0 ? &b.x : axis == 1 ? &b.y : &b.z;
        const double lo = axis == 0 ? f.domain().lo.x : axis == 1 ? f.domain().lo.y : f.domain().lo.z;
        const double hi = axis == 0 ? f.domain().hi.x : axis == 1 ? f.domain().hi.y : f.domain().hi.z;
        double va = *pa + h, vb = *pb - h;
        if (va > hi) {  // clamp to one-sided
            g.one_sided = true;
            *pa = hi;
            *pb = hi - h;
            return (f.eval(a) - f.eval(b)) / h;
        }
        if (vb < lo) {
            g.one_sided = true;
            *pa = lo + h;
            *pb = lo;
            return (f.eval(a) - f.eval(b)) / h;
        }
        *pa = va;
        *pb = vb;
        return (f.eval(a) - f.eval(b)) / (2.0 * h);
    };

    if (!d.contains(p))
        throw std::invalid_argument("horiz_grad: point outside the field domain");

    const double ux = diff(p, hx, 0);
    const double uy = diff(p, hy, 1);
    const double uz = diff(p, hz, 2);
    g.x1 = ux - 0.5 * p.y * uz;
    g.x2 = uy + 0.5 * p.x * uz;
    return g;
}

double linf_diff(const GridField& a, const GridField& b) {
    if (a.nx() != b.nx() || a.ny() != b.ny() || a.nz() != b.nz())
        throw std::invalid_argument("linf_diff: dimension mismatch");
    double m = 0.0;
    const auto& va = a.values();
    const auto& vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i)
        m = std::max(m, std::fabs(va[i] - vb[i]));
    return m;
}

std::vector<std::size_t> sublevel_node_indices(const GridField& f, double lambda,
                                               bool strict) {
    std::vector<std::size_t> out;
    const auto& v = f.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (strict ? (v[i] < lambda) : (v[i] <= lambda)) out.push_back(i);
    }
    return out;
}

std::vector<Point> sublevel_extract(const GridField& f, double lambda, bool strict) {
    std::vector<Point> pts;
    for (std::size_t idx : sublevel_node_indices(f, lambda, strict))
        pts.push_back(f.node(idx));
    return pts;
}

double interp_error_estimate(const GridField& f) {
    double m = 0.0;
    for (int k = 0; k < f.nz(); ++k)
        for (int j = 0; j < f.ny(); ++j)
            for (int i = 0; i < f.nx(); ++i) {
                if (i > 0 && i < f.nx() - 1)
                    m = std::max(m, std::fabs(f(i + 1, j, k) - 2.0 * f(i, j, k) + f(i - 1, j, k)));
                if (j > 0 && j < f.ny() - 1)
                    m = std::max(m, std::fabs(f(i, j + 1, k) - 2.0 * f(i, j, k) + f(i, j - 1, k)));
                if (k > 0 && k < f.nz() - 1)
                    m = std::max(m, std::fabs(f(i, j, k + 1) - 2.0 * f(i, j, k) + f(i, j, k - 1)));
            }
    return m / 8.0;
}

namespace {

void write_le_doubles(std::ofstream& os, const std::vector<double>& v) {
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * sizeof(double)));
    } else {
        for (double d : v) {
            std::uint64_t u;
            std::memcpy(&u, &d, 8);
            char b[8];
            for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xff);
            os.write(b, 8);
        }
    }
}

void read_le_doubles(std::ifstream& is, std::vector<double>& v) {
    if constexpr (std::endian::native == std::endian::little) {
        is.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
    } else {
        for (double& d : v) {
            unsigned char b[8];
            is.read(reinterpret_cast<char*>(b), 8);
            std::uint64_t u = 0;
            for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
            std::memcpy(&d, &u, 8);
        }
    }
}

}  // namespace

void save_field(const GridField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_field: cannot open " + path);
    char header[256];
    std::snprintf(header, sizeof(header),
                  "HHFIELD1 %d %d %d %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                  f.nx(), f.ny(), f.nz(), f.domain().lo.x, f.domain().lo.y,
                  f.domain().lo.z, f.domain().hi.x, f.domain().hi.y,
                  f.domain().hi.z, f.exterior_k());
    os << header;
    write_le_doubles(os, f.values());
    if (!os) throw std::runtime_error("save_field: write failed for " + path);
}

GridField load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_field: cannot open " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("load_field: missing header");
    char magic[16] = {0};
    GridDims dims;
    BoxDomain dom;
    double k = 0.0;
    const int got = std::sscanf(line.c_str(), "%15s %d %d %d %lg %lg %lg %lg %lg %lg %lg",
                                magic, &dims.nx, &dims.ny, &dims.nz, &dom.lo.x,
                                &dom.lo.y, &dom.lo.z, &dom.hi.x, &dom.hi.y,
                                &dom.hi.z, &k);
    if (got != 11 || std::string(magic) != "HHFIELD1")
        throw std::runtime_error("load_field: malformed header in " + path);
    GridField f(dom, dims, k);
    read_le_doubles(is, f.values());
    if (!is) throw std::runtime_error("load_field: truncated data in " + path);
    for (double v : f.values())
        if (!std::isfinite(v)) throw std::runtime_error("load_field: non-finite value in " + path);
    return f;
}

void write_slice_csv(const GridField& f, const SliceSpec& spec, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_slice_csv: cannot open " + path);
    os << "x,y,z,value\n";
    char buf[160];
    auto row = [&os, &buf, &f](int i, int j, int k) {
        const Point p = f.node(i, j, k);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", p.x, p.y, p.z,
                      f(i, j, k));
        os << buf;
    };
    const BoxDomain& d = f.domain();
    if (spec.axis == 'z') {
        if (spec.coordinate < d.lo.z || spec.coordinate > d.hi.z)
            throw std::invalid_argument("slice coordinate outside domain extent");
        const int k = static_cast<int>(std::lround((spec.coordinate - d.lo.z) / f.hz()));
        for (int j = 0; j < f.ny(); ++j)
            for (int i = 0; i < f.nx(); ++i) row(i, j, k);
    } else if (spec.axis == 'y') {
        if (spec.coordinate < d.lo.y || spec.coordinate > d.hi.y)
            throw std::invalid_argument("slice coordinate outside domain extent");
        const int j = static_cast<int>(std::lround((spec.coordinate - d.lo.y) / f.hy()));
        for (int k = 0; k < f.nz(); ++k)
            for (int i = 0; i < f.nx(); ++i) row(i, j, k);
    } else if (spec.axis == 'x') {
        if (spec.coordinate < d.lo.x || spec.coordinate > d.hi.x)
            throw std::invalid_argument("slice coordinate outside domain extent");
        const int i = static_cast<int>(std::lround((spec.coordinate - d.lo.x) / f.hx()));
        for (int k = 0; k < f.nz(); ++k)
            for (int j = 0; j < f.ny(); ++j) row(i, j, k);
    } else {
        throw std::invalid_argument("slice axis must be one of x|y|z");
    }
}

}  // namespace hqc
