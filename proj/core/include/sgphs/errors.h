#ifndef SGPHS_ERRORS_H_
#define SGPHS_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace sgphs {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid problem/model/run configuration detected before any compute.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

// API misuse: calling an operation outside its precondition.
class UsageError : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Non-finite gradient or parameter encountered during an optimizer step.
class TrainingError : public Error {
public:
    TrainingError(const std::string &message, std::string parameter_name)
        : Error(message), parameter_name_(std::move(parameter_name)) {}
    [[nodiscard]] auto parameter_name() const noexcept -> const std::string & {
        return parameter_name_;
    }

private:
    std::string parameter_name_;
};

// Evaluation function produced an unusable priority for a node.
class GuidanceError : public Error {
public:
    GuidanceError(const std::string &message, std::size_t node_id) : Error(message), node_id_(node_id) {}
    [[nodiscard]] auto node_id() const noexcept -> std::size_t {
        return node_id_;
    }

private:
    std::size_t node_id_;
};

// Every mixture numerator vanished; no usable distribution exists.
class DegeneratePolicyError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string &message, int line, int column);
    [[nodiscard]] auto line() const noexcept -> int {
        return line_;
    }
    [[nodiscard]] auto column() const noexcept -> int {
        return column_;
    }

private:
    int line_;
    int column_;
};

class GeneratorError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class VersionMismatchError : public Error {
public:
    VersionMismatchError(int found, int expected);
    [[nodiscard]] auto found() const noexcept -> int {
        return found_;
    }
    [[nodiscard]] auto expected() const noexcept -> int {
        return expected_;
    }

private:
    int found_;
    int expected_;
};

}  // namespace sgphs

#endif  // SGPHS_ERRORS_H_
