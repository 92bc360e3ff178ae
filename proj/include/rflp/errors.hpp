#ifndef RFLP_ERRORS_HPP
#define RFLP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rflp {

// Thrown when an operation receives a genotype that violates the model's
// feasibility requirements (fewer than two selected sites, or fewer than the
// fixed allocation level count).
class feasibility_error : public std::runtime_error {
public:
    explicit feasibility_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by instance file readers. Carries the source name and line number.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace rflp

#endif
