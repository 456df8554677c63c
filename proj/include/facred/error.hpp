#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace facred {

enum class Errc {
    invalid_parameters,
    crt_moduli_not_coprime,
    invalid_bias,
    sampler_timeout,
    arity_mismatch,
    slice_budget_exceeded,
    decode_failure,
    amplify_exhausted,
    width_mismatch,
    shape_mismatch,
    expansion_cap_exceeded,
    monomial_cap_exceeded,
    degree_cap_exceeded,
    range_violation,
    memory_cap_exceeded,
    edgesclusion_inconsistency,
    unsupported_regex_type,
    nfa_not_acyclic,
    parse_error,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail);
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace facred
