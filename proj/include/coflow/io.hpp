#pragma once

#include <string>

#include <json.hpp>

#include "coflow/bounds.hpp"
#include "coflow/certificate.hpp"
#include "coflow/direct.hpp"
#include "coflow/lp.hpp"
#include "coflow/model.hpp"
#include "coflow/verifier.hpp"

namespace coflow {

using Json = nlohmann::json;

/// Rationals are written as "p/q" (or "p" when integral). Reading also
/// accepts JSON integers.
Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j);

/// {"n": int, "demands": [["p/q", ...], ...]}
Json instance_to_json(const Instance& instance);
/// Throws ValidationError for a malformed document or invalid demands.
Instance instance_from_json(const Json& j);

/// {"horizon": int, "steps": [{"transfers": [{"from", "to", "commodity": [i, j], "amount"}]}]}
Json schedule_to_json(const Schedule& schedule);
/// Throws StructuralError for a malformed document. A horizon longer than the
/// step list pads with empty steps.
Schedule schedule_from_json(const Json& j);

/// {"horizon": T, "residuals": [matrix, ...], "matchings": [[{"source", "receiver", "rate"}]]}
Json trace_to_json(const GreedyTrace& trace);
/// Throws TraceError for a malformed document.
GreedyTrace trace_from_json(const Json& j);

Json report_to_json(const VerificationReport& report);
Json metrics_to_json(const Metrics& metrics);
Json certificate_to_json(const DualCertificate& certificate);
Json certificate_check_to_json(const CertificateCheck& check);
Json bounds_to_json(const BoundsReport& bounds);
Json gap_to_json(const GapReport& gap);
Json lp_solution_to_json(const LPSolution& solution);

/// Throws Error on I/O or parse failure.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace coflow
