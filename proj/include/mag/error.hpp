#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mag {

/// Error categories surfaced by the library. CLI maps these to exit codes.
enum class errc {
    empty_aspect,
    arity_mismatch,
    unknown_label,
    duplicate_edge,
    out_of_range,
    spec_arity_mismatch,
    improper_spec,
    dimension_mismatch,
    not_square,
    divergence,
    too_large,
    too_many_edges,
    no_solution,
    universe_mismatch,
    parse_error,
    unknown_class,
    io_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::empty_aspect: return "empty_aspect";
        case errc::arity_mismatch: return "arity_mismatch";
        case errc::unknown_label: return "unknown_label";
        case errc::duplicate_edge: return "duplicate_edge";
        case errc::out_of_range: return "out_of_range";
        case errc::spec_arity_mismatch: return "spec_arity_mismatch";
        case errc::improper_spec: return "improper_spec";
        case errc::dimension_mismatch: return "dimension_mismatch";
        case errc::not_square: return "not_square";
        case errc::divergence: return "divergence";
        case errc::too_large: return "too_large";
        case errc::too_many_edges: return "too_many_edges";
        case errc::no_solution: return "no_solution";
        case errc::universe_mismatch: return "universe_mismatch";
        case errc::parse_error: return "parse_error";
        case errc::unknown_class: return "unknown_class";
        case errc::io_error: return "io_error";
    }
    return "unknown";
}

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw error(code, msg); }

}  // namespace mag
