#pragma once

// JSON surface: task files, user-supplied P files, reports, solver export.
//
// Task file:
//   { "dimension": d,
//     "A": [[...], ...],                       row-major
//     "b": [...],                              optional, default zeros
//     "initial_set": {"box": {"lower": [...], "upper": [...]}}
//                  | {"vertices": [[...], ...]},
//     "property": {"Q": [[...]], "q": [...], "alpha": a}   q, alpha optional
//               | {"linear_range": {"c": [...], "lower": l, "upper": u}} }

#include <filesystem>
#include <string>

#include "json.hpp"
#include "qreach/verifier.hpp"

namespace qreach {

using json = nlohmann::json;

// Throws ParseError (with the offending field path) or DimensionMismatch.
VerificationTask parse_task(const json& doc);
VerificationTask parse_input(const std::filesystem::path& path);

// Accepts a bare nested array or {"P": [[...]]}.
Mat parse_matrix(const json& doc, const std::string& field = "P");
Mat parse_matrix_file(const std::filesystem::path& path);

// Constraint data for the two P-selection problems, for an external SDP solver.
json export_problem(const VerificationTask& task, double epsilon, const Tolerances& tol = {});

void to_json(json& j, const Mat& m);
void from_json(const json& j, Mat& m);
void to_json(json& j, const StabilityCertificate& c);
void from_json(const json& j, StabilityCertificate& c);
void to_json(json& j, const BoundScalars& s);
void from_json(const json& j, BoundScalars& s);
void to_json(json& j, const CandidateResult& r);
void from_json(const json& j, CandidateResult& r);
void to_json(json& j, const HorizonBound& b);
void from_json(const json& j, HorizonBound& b);
void to_json(json& j, const Optimum& o);
void from_json(const json& j, Optimum& o);
void to_json(json& j, const TailInfo& t);
void from_json(const json& j, TailInfo& t);
void to_json(json& j, const Verdict& v);
void from_json(const json& j, Verdict& v);
void to_json(json& j, const OracleReport& r);
void from_json(const json& j, OracleReport& r);

}  // namespace qreach
