#pragma once
// heliox/units.hpp - compile-time dimension tags for auditing formulas
//
// The library computes in plain doubles (SI). These tags exist so tests can
// restate a formula with typed operands and have the compiler check the result
// dimension, e.g.
//   Quantity<Newton> F = sqrt(4.0 * kB * T * m * w * b / Q);

#include <cmath>

namespace heliox::units {

/// Exponents of (m, kg, s, K, A).
template <int L, int M, int T, int K, int I>
struct Dim {
    static constexpr int l = L, m = M, t = T, k = K, i = I;
};

template <typename A, typename B>
using DimMul = Dim<A::l + B::l, A::m + B::m, A::t + B::t, A::k + B::k, A::i + B::i>;
template <typename A, typename B>
using DimDiv = Dim<A::l - B::l, A::m - B::m, A::t - B::t, A::k - B::k, A::i - B::i>;

template <typename D>
struct Quantity {
    double value{};
    constexpr Quantity() = default;
    constexpr explicit Quantity(double v) : value(v) {}
    template <typename D2>
    Quantity(const Quantity<D2>&) = delete; // dimension mismatch

    constexpr Quantity operator+(Quantity o) const { return Quantity(value + o.value); }
    constexpr Quantity operator-(Quantity o) const { return Quantity(value - o.value); }
};

template <typename A, typename B>
constexpr Quantity<DimMul<A, B>> operator*(Quantity<A> a, Quantity<B> b) {
    return Quantity<DimMul<A, B>>(a.value * b.value);
}
template <typename A, typename B>
constexpr Quantity<DimDiv<A, B>> operator/(Quantity<A> a, Quantity<B> b) {
    return Quantity<DimDiv<A, B>>(a.value / b.value);
}
template <typename A>
constexpr Quantity<A> operator*(double s, Quantity<A> a) {
    return Quantity<A>(s * a.value);
}
template <typename A>
constexpr Quantity<A> operator*(Quantity<A> a, double s) {
    return Quantity<A>(s * a.value);
}
template <typename A>
constexpr Quantity<A> operator/(Quantity<A> a, double s) {
    return Quantity<A>(a.value / s);
}

template <typename A>
Quantity<Dim<A::l / 2, A::m / 2, A::t / 2, A::k / 2, A::i / 2>> sqrt(Quantity<A> a) {
    static_assert(A::l % 2 == 0 && A::m % 2 == 0 && A::t % 2 == 0 && A::k % 2 == 0 && A::i % 2 == 0,
                  "sqrt of a dimension with odd exponents");
    return Quantity<Dim<A::l / 2, A::m / 2, A::t / 2, A::k / 2, A::i / 2>>(std::sqrt(a.value));
}

using Dimensionless = Dim<0, 0, 0, 0, 0>;
using Meter = Dim<1, 0, 0, 0, 0>;
using Kilogram = Dim<0, 1, 0, 0, 0>;
using Second = Dim<0, 0, 1, 0, 0>;
using Kelvin = Dim<0, 0, 0, 1, 0>;
using Ampere = Dim<0, 0, 0, 0, 1>;
using Hertz = Dim<0, 0, -1, 0, 0>;      // also rad/s
using Newton = Dim<1, 1, -2, 0, 0>;
using Joule = Dim<2, 1, -2, 0, 0>;
using Watt = Dim<2, 1, -3, 0, 0>;
using Pascal = Dim<-1, 1, -2, 0, 0>;
using JoulePerKelvin = Dim<2, 1, -2, -1, 0>;
using JouleSecond = Dim<2, 1, -1, 0, 0>;
using Tesla = Dim<0, 1, -2, 0, -1>;
using JoulePerTesla = Dim<2, 0, 0, 0, 1>;
using TeslaPerMeter = Dim<-1, 1, -2, 0, -1>;
using NewtonPerMeter = Dim<0, 1, -2, 0, 0>;
using Coulomb = Dim<0, 0, 1, 0, 1>;
using FaradPerMeter = Dim<-3, -1, 4, 0, 2>;
using CubicMeter = Dim<3, 0, 0, 0, 0>;
using JoulePerCubicMeter = Pascal;
using Polarizability = Dim<0, -1, 4, 0, 2>; // C m^2 / V
using NewtonSqPerHertz = Dim<2, 2, -3, 0, 0>;
using PerMeter = Dim<-1, 0, 0, 0, 0>;

} // namespace heliox::units
