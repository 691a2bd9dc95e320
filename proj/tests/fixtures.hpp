#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "feynmat/linalg.hpp"

inline std::string fixture_path(const std::string& name) {
    const char* dir = std::getenv("FEYNMAT_FIXTURES");
    return std::string(dir ? dir : FEYNMAT_FIXTURE_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name));
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline feynmat::RationalMatrix load_matrix(const std::string& name) {
    return feynmat::parse_matrix_literal(read_fixture(name));
}
