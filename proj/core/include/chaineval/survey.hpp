#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaineval/phase.hpp"

namespace chaineval {

// Which end of an interval to use when a point value is needed. Mid is the
// default; lo/hi expose endpoint sensitivity.
enum class IntervalPoint { Lo, Mid, Hi };

std::string_view to_string(IntervalPoint p);
std::optional<IntervalPoint> interval_point_from_string(std::string_view name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double midpoint() const { return (lo + hi) / 2.0; }
  double at(IntervalPoint p) const;

  bool operator==(const Interval&) const = default;
};

enum class Confidence { Low, Medium, High };

std::string_view to_string(Confidence c);
std::optional<Confidence> confidence_from_string(std::string_view name);

// One survey row: one expert's cost interval for one phase of one case
// study. min_resource_* are the sophisticated-adversary lower bounds; absent
// when the expert gave none.
struct ExpertEstimate {
  std::string case_study_id;
  Phase phase = Phase::Reconnaissance;
  std::string expert_id;
  Interval human_days;
  Interval direct_dollars;
  Confidence confidence = Confidence::Medium;
  std::optional<Interval> min_resource_human_days;
  std::optional<Interval> min_resource_dollars;
  // Consensus points set by merge_expert_estimates; the envelope midpoint of
  // a merged interval is not the mean of the contributors' midpoints, so the
  // point has to travel separately.
  std::optional<double> point_human_days;
  std::optional<double> point_direct_dollars;

  bool operator==(const ExpertEstimate&) const = default;
};

struct CaseStudy {
  std::string id;
  std::string name;
  int year = 2010;  // >= 2010 by selection rule
  bool excluded_as_outlier = false;
  std::vector<ExpertEstimate> estimates;  // (phase, expert_id) unique

  bool operator==(const CaseStudy&) const = default;
};

// Loads a survey file, JSON or CSV by extension. CSV is one row per
// case x phase x expert with the documented header. All row-level schema
// violations are collected into a single ValidationError.
std::vector<CaseStudy> load_survey(const std::filesystem::path& path);

std::vector<std::string> validate_survey(const std::vector<CaseStudy>& cases);

// Consensus merge of two estimates for the same (case study, phase):
// envelope intervals, mean-of-points point, lower of the two confidences.
// Throws ValidationError on mismatched case/phase.
ExpertEstimate merge_expert_estimates(const ExpertEstimate& a,
                                      const ExpertEstimate& b);

}  // namespace chaineval
