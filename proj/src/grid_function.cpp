#include "nlcalc/grid_function.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlcalc {

namespace {

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

GridFunction::GridFunction(double a, double b, std::vector<double> values)
    : a_(a), b_(b), values_(std::move(values)) {
    if (!(a < b)) throw std::invalid_argument("GridFunction: need a < b");
    if (!is_power_of_two(values_.size()))
        throw std::invalid_argument("GridFunction: sample count must be a power of two >= 2");
    for (double v : values_)
        if (!std::isfinite(v))
            throw std::invalid_argument("GridFunction: values must be finite");
}

GridFunction GridFunction::sample(double a, double b, std::size_t n,
                                  const std::function<double(double)>& fn) {
    std::vector<double> values(n);
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        values[i] = fn(a + h * static_cast<double>(i));
    return GridFunction(a, b, std::move(values));
}

bool GridFunction::same_grid(const GridFunction& other, double rel_tol) const {
    const double scale = std::max(std::fabs(a_), std::fabs(b_));
    return values_.size() == other.values_.size() &&
           std::fabs(a_ - other.a_) <= rel_tol * scale &&
           std::fabs(b_ - other.b_) <= rel_tol * scale;
}

double GridFunction::interpolate(double t) const {
    const double h = spacing();
    const std::size_t n = values_.size();
    const double last = max_point();
    if (t < a_ - 1e-12 * h || t > last + 1e-12 * h)
        throw std::domain_error("GridFunction::interpolate: point outside sampled range");
    t = std::min(std::max(t, a_), last);

    // Cell index, then a 4-point stencil clamped at the ends.
    double x = (t - a_) / h;
    std::size_t cell = std::min(static_cast<std::size_t>(x), n - 2);
    std::size_t lo = (cell >= 1) ? cell - 1 : 0;
    lo = std::min(lo, n - 4);
    x -= static_cast<double>(lo);

    double value = 0.0;
    for (int p = 0; p < 4; ++p) {
        double weight = 1.0;
        for (int q = 0; q < 4; ++q) {
            if (q == p) continue;
            weight *= (x - q) / (p - q);
        }
        value += weight * values_[lo + p];
    }
    return value;
}

void write_csv(const GridFunction& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << "# a=" << format_double(g.a()) << " b=" << format_double(g.b())
        << " n=" << g.size() << "\n";
    out << "t,value\n";
    for (std::size_t i = 0; i < g.size(); ++i)
        out << format_double(g.point(i)) << "," << format_double(g[i]) << "\n";
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

GridFunction read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# a=", 0) != 0)
        throw std::runtime_error("read_csv: missing grid header in " + path);

    double a = 0.0, b = 0.0;
    std::size_t n = 0;
    if (std::sscanf(line.c_str(), "# a=%lf b=%lf n=%zu", &a, &b, &n) != 3)
        throw std::runtime_error("read_csv: malformed grid header in " + path);

    std::vector<double> values;
    values.reserve(n);
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("t,", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("read_csv: malformed row in " + path);
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (values.size() != n)
        throw std::runtime_error("read_csv: sample count does not match header in " + path);
    return GridFunction(a, b, std::move(values));
}

} // namespace nlcalc
