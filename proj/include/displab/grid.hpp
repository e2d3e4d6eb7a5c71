#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace displab {

/// Physical/frequency coordinates of a point, padded to 2 components.
/// For d = 1 the second component is 0.
using Vec = std::array<double, 2>;

/// Integer lattice vector (window index k); second component 0 for d = 1.
using KVec = std::array<int, 2>;

/// Periodic sampling grid for the torus [-L/2, L/2)^d approximating R^d.
/// n samples per axis (power of two), physical spacing L/n, frequency
/// lattice xi_m = 2*pi*m/L for m in [-n/2, n/2).
struct Grid {
    int d = 1;
    int n = 0;
    double box_len = 0.0;

    std::size_t total() const {
        return d == 1 ? std::size_t(n) : std::size_t(n) * n;
    }
    double dx() const { return box_len / n; }
    double cell_volume() const { return d == 1 ? dx() : dx() * dx(); }
    double freq_spacing() const { return 2.0 * 3.14159265358979323846 / box_len; }
    double nyquist() const { return freq_spacing() * (n / 2); }
    double half_nyquist() const { return 0.5 * nyquist(); }

    /// Signed lattice index along one axis from the FFT storage index.
    int signed_index(int j) const { return j < n / 2 ? j : j - n; }
    double coord(int j) const { return -0.5 * box_len + j * dx(); }
    double freq(int j) const { return freq_spacing() * signed_index(j); }

    /// Physical position of flat index idx (row-major for d = 2).
    Vec point(std::size_t idx) const {
        if (d == 1) return {coord(int(idx)), 0.0};
        return {coord(int(idx / n)), coord(int(idx % n))};
    }
    /// Frequency of flat index idx.
    Vec freq_point(std::size_t idx) const {
        if (d == 1) return {freq(int(idx)), 0.0};
        return {freq(int(idx / n)), freq(int(idx % n))};
    }
    /// Parity (-1)^(m1+m2) of the lattice indices, used when converting
    /// between FFT-ordered spectra and continuum densities (grid origin
    /// sits at -L/2, not 0).
    double parity(std::size_t idx) const {
        int s;
        if (d == 1) {
            s = signed_index(int(idx));
        } else {
            s = signed_index(int(idx / n)) + signed_index(int(idx % n));
        }
        return (s & 1) ? -1.0 : 1.0;
    }

    bool operator==(const Grid& o) const {
        return d == o.d && n == o.n && box_len == o.box_len;
    }
};

/// Validating constructor: d in {1,2}, n a power of two >= 8, L > 0.
Grid make_grid(int d, int n, double box_len);

}  // namespace displab
