#include "displab/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace displab {

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
    os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(os, bits);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw std::runtime_error("snapshot: truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) {
    std::uint64_t bits = get_u64(is);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void write_snapshot(std::ostream& os, const Field& f, double time_tag) {
    const Grid& g = f.grid();
    put_u64(os, std::uint64_t(g.d));
    put_u64(os, std::uint64_t(g.n));
    put_f64(os, g.box_len);
    put_f64(os, time_tag);
    for (const auto& v : f.samples()) {
        put_f64(os, v.real());
        put_f64(os, v.imag());
    }
}

Field read_snapshot(std::istream& is, double* time_tag) {
    int d = int(get_u64(is));
    int n = int(get_u64(is));
    double box_len = get_f64(is);
    double tag = get_f64(is);
    if (time_tag) *time_tag = tag;
    Grid g = make_grid(d, n, box_len);
    std::vector<cplx> samples(g.total());
    for (auto& v : samples) {
        double re = get_f64(is);
        double im = get_f64(is);
        v = cplx(re, im);
    }
    return Field::from_samples(g, std::move(samples));
}

void save_snapshot(const std::string& path, const Field& f, double time_tag) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("snapshot: cannot open " + path);
    write_snapshot(os, f, time_tag);
}

Field load_snapshot(const std::string& path, double* time_tag) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("snapshot: cannot open " + path);
    return read_snapshot(is, time_tag);
}

}  // namespace displab
