#pragma once

#include <stdexcept>
#include <string>

namespace resonant {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid user-facing configuration. `path` names the offending field.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// A named resource (memory, transform budget, ...) would be exceeded.
class CapacityError : public Error {
public:
    CapacityError(const std::string& resource, const std::string& what)
        : Error(resource + " budget exceeded: " + what), resource_(resource) {}
    const std::string& resource() const noexcept { return resource_; }

private:
    std::string resource_;
};

// Mode index outside the window, or mismatched windows between operands.
class WindowError : public Error {
public:
    using Error::Error;
};

// Parameter outside its admissible mathematical range.
class ConstraintError : public Error {
public:
    using Error::Error;
};

// Time step rejected by the integrator's mass check.
class InstabilityError : public Error {
public:
    InstabilityError(double t, double rel_drift, const std::string& what)
        : Error(what), t_(t), drift_(rel_drift) {}
    double time() const noexcept { return t_; }
    double drift() const noexcept { return drift_; }

private:
    double t_;
    double drift_;
};

// Malformed or corrupted persisted data.
class FormatError : public Error {
public:
    using Error::Error;
};

class UnsupportedVersionError : public FormatError {
public:
    UnsupportedVersionError(unsigned found, unsigned supported)
        : FormatError("unsupported snapshot version " + std::to_string(found) +
                      " (reader supports " + std::to_string(supported) + ")"),
          found_(found) {}
    unsigned found() const noexcept { return found_; }

private:
    unsigned found_;
};

}  // namespace resonant
