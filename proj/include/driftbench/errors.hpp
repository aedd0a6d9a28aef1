#pragma once

#include <stdexcept>
#include <string>

namespace driftbench {

// bad user input: malformed files, invalid options, schema violations (CLI exit 2)
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// internally inconsistent data: grid mismatches, duplicate ids, integration blowups (CLI exit 3)
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace driftbench
