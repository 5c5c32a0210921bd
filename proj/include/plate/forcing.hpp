#ifndef PLATE_FORCING_HPP
#define PLATE_FORCING_HPP

#include <array>
#include <cmath>
#include <functional>

#include "plate/errors.hpp"

namespace plate {

// Body force F(x, y, t).  LocalizedSinusoid is F0*cos(xi*t) restricted to an
// axis-aligned box (the oscillator footprint of the Chladni experiment).
struct ForcingSpec {
    enum class Type { Zero, Analytic, LocalizedSinusoid };
    Type type = Type::Zero;
    std::function<double(double, double, double)> fn; // Analytic
    double F0 = 0.0;
    double xi = 0.0;                    // angular frequency (rad/s)
    std::array<double, 4> box{0, 0, 0, 0}; // x_lo, x_hi, y_lo, y_hi

    static ForcingSpec zero() { return {}; }

    static ForcingSpec analytic(std::function<double(double, double, double)> f) {
        ForcingSpec s;
        s.type = Type::Analytic;
        s.fn = std::move(f);
        return s;
    }

    static ForcingSpec localized(double F0, double xi, std::array<double, 4> box) {
        if (!(box[1] > box[0]) || !(box[3] > box[2]))
            throw ConfigError("localized forcing box is degenerate");
        ForcingSpec s;
        s.type = Type::LocalizedSinusoid;
        s.F0 = F0;
        s.xi = xi;
        s.box = box;
        return s;
    }

    bool is_zero() const { return type == Type::Zero; }

    double operator()(double x, double y, double t) const {
        switch (type) {
            case Type::Zero:
                return 0.0;
            case Type::Analytic:
                return fn(x, y, t);
            case Type::LocalizedSinusoid:
                if (x >= box[0] && x <= box[1] && y >= box[2] && y <= box[3])
                    return F0 * std::cos(xi * t);
                return 0.0;
        }
        return 0.0;
    }
};

} // namespace plate

#endif
