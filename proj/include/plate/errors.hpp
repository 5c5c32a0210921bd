#ifndef PLATE_ERRORS_HPP
#define PLATE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace plate {

// Bad user input: mesh extents, parameter ranges, config files.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Time integration blew up (|w| exceeded the abort threshold or went non-finite).
class InstabilityError : public std::runtime_error {
public:
    InstabilityError(const std::string& what, long step, double time)
        : std::runtime_error(what), step(step), time(time) {}
    long step;
    double time;
};

// Linear algebra breakdown (factorization failed, residual not met, eigensolver stalled).
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace plate

#endif
