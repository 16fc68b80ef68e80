#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rgg::verify {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// specfun, model, stats, theory, mc.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Unknown names throw DomainError.
std::vector<CheckResult> run_suite(std::string_view suite, std::uint64_t seed, int workers = 1);

}  // namespace rgg::verify
