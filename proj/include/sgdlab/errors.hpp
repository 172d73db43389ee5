#ifndef SGDLAB_ERRORS_HPP
#define SGDLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sgdlab {

// Invalid configuration value or unknown key (CLI exit code 2).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A supplied function produced a non-finite value.
struct eval_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Trajectory left the admissible region (CLI exit code 3).
struct divergence_error : std::runtime_error {
    divergence_error(const std::string& what, double t)
        : std::runtime_error(what), t_blowup(t) {}
    double t_blowup;
};

// Root finder could not bracket a sign change.
struct bracket_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A quantity violated an invariant the model guarantees.
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sgdlab

#endif  // SGDLAB_ERRORS_HPP
