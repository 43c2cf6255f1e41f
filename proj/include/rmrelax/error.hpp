#pragma once

#include <stdexcept>
#include <string>

namespace rmrelax {

enum class ErrorKind {
    invalid_argument,
    non_normalizable,
    non_monotone_grid,
    negative_density,
    real_axis_evaluation,
    atomic_measure,
    divergent_tail,
    no_convergence,
    mass_deficit,
    empty_window,
    window_out_of_range,
    tail_overflow,
    quadrature_budget_exceeded,
    denominator_near_zero,
    eigendecomposition_failure,
    spectrum_out_of_range,
    zero_rate,
    parse_error,
    validation_error,
    missing_column,
    io_error,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace rmrelax
