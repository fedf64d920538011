#pragma once

#include <stdexcept>
#include <string>

namespace twofold {

/// Base of every error raised by the library. `kind()` is a stable tag used in
/// machine-readable CLI error records.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& m) : Error("invalid_input", m) {}
};

/// ADI / CV2 requested for a series without any demand.
class UndefinedPattern : public Error {
public:
    explicit UndefinedPattern(const std::string& m) : Error("undefined_pattern", m) {}
};

/// A forecaster was asked for a value without any usable history.
class NoForecast : public Error {
public:
    explicit NoForecast(const std::string& m) : Error("no_forecast", m) {}
};

class UndefinedMetric : public Error {
public:
    explicit UndefinedMetric(const std::string& m) : Error("undefined_metric", m) {}
};

class SchemaMismatch : public Error {
public:
    explicit SchemaMismatch(const std::string& m) : Error("schema_mismatch", m) {}
};

class LeakageError : public Error {
public:
    explicit LeakageError(const std::string& m) : Error("leakage", m) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& m) : Error("config", m) {}
};

class NotFitted : public Error {
public:
    explicit NotFitted(const std::string& m) : Error("not_fitted", m) {}
};

}  // namespace twofold
