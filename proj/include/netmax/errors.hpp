#pragma once

#include <stdexcept>
#include <string>

namespace netmax {

enum class errc {
    disconnected_graph,
    asymmetric_adjacency,
    self_loop_present,
    unknown_edge,
    non_positive_alpha,
    empty_interval,
    invalid_interval,
    infeasible,
    numerical_failure,
    zero_probability_edge,
    zero_probability,
    not_converged,
    degenerate_lambda,
    zero_iteration_time,
    invalid_m,
    invalid_a,
    singular_system,
    beta_out_of_range,
    config_invalid,
    io_failure,
};

const char* errc_name(errc code);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

} // namespace netmax
