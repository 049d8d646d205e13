#ifndef MINNORM_COMMON_HPP
#define MINNORM_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace minnorm {

/// Shape mismatch between tensors (wrong input width, inconsistent layer sizes).
class shape_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A precondition on values was violated (empty batch, invalid masses, ...).
class domain_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A non-finite value appeared where a finite one is required.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number when known.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& msg, long line = 0)
        : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

/// File could not be opened or written.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad run configuration (unknown key, out-of-range value, missing file).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Fixed-point formatting with `precision` digits after the point.
std::string format_fixed(double v, int precision);

/// Locale-independent double parse of the whole string. Throws parse_error.
double parse_double(std::string_view s);

/// Locale-independent integer parse of the whole string. Throws parse_error.
long long parse_int(std::string_view s);

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(std::string_view s);

/// SplitMix64 output function; also used to mix stream keys.
std::uint64_t mix64(std::uint64_t z);

} // namespace minnorm

#endif
