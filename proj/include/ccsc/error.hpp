#ifndef CCSC_ERROR_HPP
#define CCSC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ccsc {

enum class Errc {
    invalid_size,
    unsupported_size,
    duplicate_point,
    degenerate,
    invalid_order,
    numerical_domain,
    insufficient_samples,
    invalid_argument,
    not_less_noisy,
    invalid_noise,
    invalid_bracket,
    no_interior_max,
    io,
    parse,
};

const char* to_string(Errc code) noexcept;

// All library failures are reported through this type; the CLI maps the
// code to an exit status.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline const char* to_string(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_size: return "invalid size";
    case Errc::unsupported_size: return "unsupported size";
    case Errc::duplicate_point: return "duplicate point";
    case Errc::degenerate: return "degenerate constellation";
    case Errc::invalid_order: return "invalid order";
    case Errc::numerical_domain: return "numerical domain error";
    case Errc::insufficient_samples: return "insufficient samples";
    case Errc::invalid_argument: return "invalid argument";
    case Errc::not_less_noisy: return "eavesdropper channel not less noisy";
    case Errc::invalid_noise: return "invalid noise variance";
    case Errc::invalid_bracket: return "invalid bracket";
    case Errc::no_interior_max: return "no interior maximum";
    case Errc::io: return "i/o error";
    case Errc::parse: return "parse error";
    }
    return "unknown error";
}

} // namespace ccsc

#endif
