// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace wchaos::validation {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
};

using Reporter = std::function<void(const CriterionResult&)>;

CriterionResult productFormulaExactness(std::uint64_t seed);
CriterionResult exactMomentOracle(std::uint64_t seed);
CriterionResult positiveFamily(std::uint64_t seed);
CriterionResult negativeFamily(std::uint64_t seed);
CriterionResult spectralBridge(std::uint64_t seed);
CriterionResult stroockCoupling(std::uint64_t seed);
CriterionResult sheetLimit(std::uint64_t seed);
CriterionResult fbmTrendSuite(std::uint64_t seed);
CriterionResult noncentralTrend(std::uint64_t seed);

/// Criteria 1-9 in order, reporting each as soon as it finishes.
std::vector<CriterionResult> runCoreCriteria(std::uint64_t seed, const Reporter& report = {});

/// One line per criterion: id,name,pass,detail.
std::string resultsCsv(const std::vector<CriterionResult>& results);
nlohmann::ordered_json resultsJson(const std::vector<CriterionResult>& results, std::uint64_t seed);

/// Criteria 1-9 with `threads` workers, then criterion 10: the same suite
/// re-run with a different worker count must serialize to identical bytes.
std::vector<CriterionResult> runValidation(std::uint64_t seed, int threads, const Reporter& report = {});

std::string formatLine(const CriterionResult& r);

}  // namespace wchaos::validation
