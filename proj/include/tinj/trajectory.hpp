#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tinj {

/// Signed outcome string of one full round of stabiliser measurements.
/// Bit i of x_bits / z_bits is the i-th stabiliser in layout order,
/// 0 <-> eigenvalue +1, 1 <-> eigenvalue -1. Strings print the first
/// stabiliser leftmost, matching hat notation.
struct Trajectory {
    std::uint64_t x_bits = 0;
    std::uint64_t z_bits = 0;
    int n_x = 0;
    int n_z = 0;

    bool x_bit(int i) const { return (x_bits >> i) & 1; }
    bool z_bit(int i) const { return (z_bits >> i) & 1; }

    static std::string bits_string(std::uint64_t bits, int n) {
        std::string s(static_cast<std::size_t>(n), '0');
        for (int i = 0; i < n; ++i)
            if ((bits >> i) & 1) s[i] = '1';
        return s;
    }

    std::string x_string() const { return bits_string(x_bits, n_x); }
    std::string z_string() const { return bits_string(z_bits, n_z); }

    std::string to_string() const { return "x=" + x_string() + " z=" + z_string(); }

    /// Compact single-token form used in CSV columns: x<bits>z<bits>.
    std::string to_compact_string() const { return "x" + x_string() + "z" + z_string(); }

    static std::uint64_t parse_bits(std::string_view s, int expected) {
        if (static_cast<int>(s.size()) != expected)
            throw std::invalid_argument("trajectory bit string has wrong length: " + std::string(s));
        std::uint64_t bits = 0;
        for (int i = 0; i < expected; ++i) {
            if (s[i] == '1')
                bits |= std::uint64_t{1} << i;
            else if (s[i] != '0')
                throw std::invalid_argument("trajectory bits must be 0/1");
        }
        return bits;
    }

    /// Accepts "x=10 z=01", "x=10;z=01" or "x10z01".
    static Trajectory parse(std::string_view text, int n_x, int n_z) {
        std::string s;
        for (char c : text)
            if (c != ' ' && c != '=' && c != ';') s.push_back(c);
        if (s.empty() || (s[0] != 'x' && s[0] != 'X'))
            throw std::invalid_argument("trajectory must start with x bits: " + std::string(text));
        auto zpos = s.find_first_of("zZ", 1);
        if (zpos == std::string::npos)
            throw std::invalid_argument("trajectory missing z bits: " + std::string(text));
        Trajectory t;
        t.n_x = n_x;
        t.n_z = n_z;
        t.x_bits = parse_bits(std::string_view(s).substr(1, zpos - 1), n_x);
        t.z_bits = parse_bits(std::string_view(s).substr(zpos + 1), n_z);
        return t;
    }

    friend auto operator<=>(const Trajectory&, const Trajectory&) = default;
};

}  // namespace tinj
