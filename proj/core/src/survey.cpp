#include "chaineval/survey.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "chaineval/errors.hpp"
#include "json_util.hpp"

namespace chaineval {

namespace {

using nlohmann::json;

std::optional<Interval> interval_from_json(const json& value,
                                           const std::string& where,
                                           std::vector<std::string>& findings) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
      !value[1].is_number()) {
    findings.push_back(where + ": interval must be [lo, hi]");
    return std::nullopt;
  }
  return Interval{value[0].get<double>(), value[1].get<double>()};
}

ExpertEstimate estimate_from_json(const json& item, const std::string& case_id,
                                  std::vector<std::string>& findings) {
  ExpertEstimate e;
  e.case_study_id = case_id;
  e.expert_id = item.value("expert_id", "");
  const std::string where =
      "case '" + case_id + "' expert '" + e.expert_id + "'";
  if (auto phase = phase_from_string(item.value("phase", ""))) {
    e.phase = *phase;
  } else {
    findings.push_back(where + ": unknown phase '" + item.value("phase", "") +
                       "'");
  }
  if (item.contains("human_days")) {
    if (auto iv = interval_from_json(item["human_days"], where, findings)) {
      e.human_days = *iv;
    }
  } else {
    findings.push_back(where + ": missing human_days");
  }
  if (item.contains("direct_dollars")) {
    if (auto iv = interval_from_json(item["direct_dollars"], where, findings)) {
      e.direct_dollars = *iv;
    }
  }
  if (auto c = confidence_from_string(item.value("confidence", "medium"))) {
    e.confidence = *c;
  } else {
    findings.push_back(where + ": unknown confidence '" +
                       item.value("confidence", "") + "'");
  }
  if (item.contains("min_resource_human_days")) {
    e.min_resource_human_days =
        interval_from_json(item["min_resource_human_days"], where, findings);
  }
  if (item.contains("min_resource_dollars")) {
    e.min_resource_dollars =
        interval_from_json(item["min_resource_dollars"], where, findings);
  }
  return e;
}

// CSV columns, one row per case x phase x expert. Optional cells are empty.
const char* kCsvHeader =
    "case_study_id,case_study_name,year,excluded_as_outlier,phase,expert_id,"
    "human_days_lo,human_days_hi,direct_dollars_lo,direct_dollars_hi,"
    "confidence,min_human_days_lo,min_human_days_hi,min_dollars_lo,"
    "min_dollars_hi";

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) return std::nullopt;
    return value;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::vector<CaseStudy> survey_from_csv(const std::string& content,
                                       const std::string& origin) {
  std::istringstream lines(content);
  std::string line;
  if (!std::getline(lines, line)) {
    throw ParseError(origin + ": empty survey file");
  }
  {
    auto header = split_csv_row(line);
    auto expected = split_csv_row(kCsvHeader);
    if (header != expected) {
      throw ParseError(origin + ": unexpected CSV header; expected '" +
                       kCsvHeader + "'");
    }
  }

  std::vector<std::string> findings;
  std::map<std::string, CaseStudy> cases;
  std::vector<std::string> case_order;
  std::size_t line_no = 1;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_row(line);
    const std::string where = origin + ":" + std::to_string(line_no);
    if (fields.size() != 15) {
      findings.push_back(where + ": expected 15 columns, got " +
                         std::to_string(fields.size()));
      continue;
    }
    const std::string& case_id = fields[0];
    if (!cases.count(case_id)) {
      CaseStudy cs;
      cs.id = case_id;
      cs.name = fields[1];
      cs.year = static_cast<int>(parse_number(fields[2]).value_or(0));
      cs.excluded_as_outlier = fields[3] == "true" || fields[3] == "1";
      cases[case_id] = std::move(cs);
      case_order.push_back(case_id);
    }
    ExpertEstimate e;
    e.case_study_id = case_id;
    if (auto phase = phase_from_string(fields[4])) {
      e.phase = *phase;
    } else {
      findings.push_back(where + ": unknown phase '" + fields[4] + "'");
      continue;
    }
    e.expert_id = fields[5];
    auto days_lo = parse_number(fields[6]);
    auto days_hi = parse_number(fields[7]);
    if (!days_lo || !days_hi) {
      findings.push_back(where + ": human_days interval must be numeric");
      continue;
    }
    e.human_days = {*days_lo, *days_hi};
    e.direct_dollars = {parse_number(fields[8]).value_or(0.0),
                        parse_number(fields[9]).value_or(0.0)};
    if (auto c = confidence_from_string(
            fields[10].empty() ? "medium" : fields[10])) {
      e.confidence = *c;
    } else {
      findings.push_back(where + ": unknown confidence '" + fields[10] + "'");
    }
    auto min_days_lo = parse_number(fields[11]);
    auto min_days_hi = parse_number(fields[12]);
    if (min_days_lo && min_days_hi) {
      e.min_resource_human_days = Interval{*min_days_lo, *min_days_hi};
    }
    auto min_dollars_lo = parse_number(fields[13]);
    auto min_dollars_hi = parse_number(fields[14]);
    if (min_dollars_lo && min_dollars_hi) {
      e.min_resource_dollars = Interval{*min_dollars_lo, *min_dollars_hi};
    }
    cases[case_id].estimates.push_back(std::move(e));
  }
  if (!findings.empty()) {
    throw ValidationError(std::move(findings));
  }

  std::vector<CaseStudy> out;
  out.reserve(case_order.size());
  for (const std::string& id : case_order) {
    out.push_back(std::move(cases[id]));
  }
  return out;
}

std::vector<CaseStudy> survey_from_json(const json& doc,
                                        const std::string& origin) {
  if (!doc.is_object() || !doc.contains("case_studies")) {
    throw ValidationError(origin +
                          ": survey must be an object with 'case_studies'");
  }
  std::vector<std::string> findings;
  std::vector<CaseStudy> cases;
  for (const json& item : doc["case_studies"]) {
    CaseStudy cs;
    cs.id = item.value("id", "");
    cs.name = item.value("name", "");
    cs.year = item.value("year", 0);
    cs.excluded_as_outlier = item.value("excluded_as_outlier", false);
    for (const json& est : item.value("estimates", json::array())) {
      cs.estimates.push_back(estimate_from_json(est, cs.id, findings));
    }
    cases.push_back(std::move(cs));
  }
  if (!findings.empty()) {
    throw ValidationError(std::move(findings));
  }
  return cases;
}

}  // namespace

double Interval::at(IntervalPoint p) const {
  switch (p) {
    case IntervalPoint::Lo:
      return lo;
    case IntervalPoint::Mid:
      return midpoint();
    case IntervalPoint::Hi:
      return hi;
  }
  return midpoint();
}

std::string_view to_string(IntervalPoint p) {
  switch (p) {
    case IntervalPoint::Lo:
      return "lo";
    case IntervalPoint::Mid:
      return "mid";
    case IntervalPoint::Hi:
      return "hi";
  }
  return "mid";
}

std::optional<IntervalPoint> interval_point_from_string(std::string_view name) {
  if (name == "lo") return IntervalPoint::Lo;
  if (name == "mid") return IntervalPoint::Mid;
  if (name == "hi") return IntervalPoint::Hi;
  return std::nullopt;
}

std::string_view to_string(Confidence c) {
  switch (c) {
    case Confidence::Low:
      return "low";
    case Confidence::Medium:
      return "medium";
    case Confidence::High:
      return "high";
  }
  return "medium";
}

std::optional<Confidence> confidence_from_string(std::string_view name) {
  if (name == "low") return Confidence::Low;
  if (name == "medium") return Confidence::Medium;
  if (name == "high") return Confidence::High;
  return std::nullopt;
}

std::vector<std::string> validate_survey(const std::vector<CaseStudy>& cases) {
  std::vector<std::string> findings;
  std::set<std::string> case_ids;
  for (const CaseStudy& cs : cases) {
    const std::string where = "case '" + cs.id + "'";
    if (cs.id.empty()) {
      findings.push_back("case study with empty id");
    }
    if (!case_ids.insert(cs.id).second) {
      findings.push_back("duplicate case study id '" + cs.id + "'");
    }
    if (cs.year < 2010) {
      findings.push_back(where + ": year must be >= 2010 (selection rule)");
    }
    std::set<std::pair<Phase, std::string>> seen;
    for (const ExpertEstimate& e : cs.estimates) {
      if (!seen.insert({e.phase, e.expert_id}).second) {
        findings.push_back(where + ": duplicate (phase, expert) pair ('" +
                           std::string(to_string(e.phase)) + "', '" +
                           e.expert_id + "')");
      }
      const auto check_interval = [&](const char* name, const Interval& iv) {
        if (iv.lo > iv.hi) {
          findings.push_back(where + ": " + name + " has lo > hi");
        }
        if (iv.lo < 0.0) {
          findings.push_back(where + ": " + name + " must be nonnegative");
        }
      };
      check_interval("human_days", e.human_days);
      check_interval("direct_dollars", e.direct_dollars);
      if (e.min_resource_human_days) {
        check_interval("min_resource_human_days", *e.min_resource_human_days);
      }
      if (e.min_resource_dollars) {
        check_interval("min_resource_dollars", *e.min_resource_dollars);
      }
    }
  }
  return findings;
}

std::vector<CaseStudy> load_survey(const std::filesystem::path& path) {
  std::vector<CaseStudy> cases;
  if (path.extension() == ".csv") {
    cases = survey_from_csv(detail::read_file(path), path.string());
  } else {
    cases = survey_from_json(detail::parse_json_file(path), path.string());
  }
  auto findings = validate_survey(cases);
  if (!findings.empty()) {
    throw ValidationError(std::move(findings));
  }
  return cases;
}

ExpertEstimate merge_expert_estimates(const ExpertEstimate& a,
                                      const ExpertEstimate& b) {
  if (a.case_study_id != b.case_study_id || a.phase != b.phase) {
    throw ValidationError(
        "cannot merge estimates for different case studies or phases");
  }
  if (a == b) {
    return a;  // idempotent on equal inputs
  }

  const auto point_of = [](const std::optional<double>& override_point,
                           const Interval& iv) {
    return override_point.value_or(iv.midpoint());
  };
  const auto envelope = [](const Interval& x, const Interval& y) {
    return Interval{std::min(x.lo, y.lo), std::max(x.hi, y.hi)};
  };

  ExpertEstimate merged;
  merged.case_study_id = a.case_study_id;
  merged.phase = a.phase;
  merged.expert_id = a.expert_id + "+" + b.expert_id;
  merged.human_days = envelope(a.human_days, b.human_days);
  merged.direct_dollars = envelope(a.direct_dollars, b.direct_dollars);
  merged.point_human_days = (point_of(a.point_human_days, a.human_days) +
                             point_of(b.point_human_days, b.human_days)) /
                            2.0;
  merged.point_direct_dollars =
      (point_of(a.point_direct_dollars, a.direct_dollars) +
       point_of(b.point_direct_dollars, b.direct_dollars)) /
      2.0;
  merged.confidence = std::min(a.confidence, b.confidence);
  if (a.min_resource_human_days && b.min_resource_human_days) {
    merged.min_resource_human_days =
        envelope(*a.min_resource_human_days, *b.min_resource_human_days);
  } else if (a.min_resource_human_days || b.min_resource_human_days) {
    merged.min_resource_human_days =
        a.min_resource_human_days ? a.min_resource_human_days
                                  : b.min_resource_human_days;
  }
  if (a.min_resource_dollars && b.min_resource_dollars) {
    merged.min_resource_dollars =
        envelope(*a.min_resource_dollars, *b.min_resource_dollars);
  } else if (a.min_resource_dollars || b.min_resource_dollars) {
    merged.min_resource_dollars =
        a.min_resource_dollars ? a.min_resource_dollars
                               : b.min_resource_dollars;
  }
  return merged;
}

}  // namespace chaineval
