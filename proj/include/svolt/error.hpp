#pragma once

#include <stdexcept>
#include <string>

namespace svolt {

// Numerical failures get their own types so callers can tell a bad input
// (std::invalid_argument / std::domain_error) from a method that gave up.

class integration_error : public std::runtime_error {
public:
  explicit integration_error(const std::string& msg) : std::runtime_error(msg) {}
};

class analysis_error : public std::runtime_error {
public:
  explicit analysis_error(const std::string& msg) : std::runtime_error(msg) {}
};

class simulation_error : public std::runtime_error {
public:
  explicit simulation_error(const std::string& msg) : std::runtime_error(msg) {}
};

class covariance_error : public std::runtime_error {
public:
  explicit covariance_error(const std::string& msg) : std::runtime_error(msg) {}
};

class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace svolt
