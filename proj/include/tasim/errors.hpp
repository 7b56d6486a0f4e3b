#ifndef TASIM_ERRORS_HPP
#define TASIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tasim {

// Bad scenario file or invalid parameter combination.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A closed-form evaluation lost too much precision to be trusted.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Term enumeration would exceed the configured cap.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tasim

#endif
