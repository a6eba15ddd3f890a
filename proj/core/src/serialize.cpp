#include "lassocv/serialize.hpp"

#include <charconv>
#include <cstdio>

#include <json.hpp>

#include "lassocv/errors.hpp"

namespace lassocv {

using nlohmann::json;

std::string format_double(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) {
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
  }
  return std::string(buffer, end);
}

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v[i]);
  }
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& value : j) {
    out[i++] = value.get<double>();
  }
  return out;
}

}  // namespace

std::string dataset_to_json(const Dataset& data) {
  json j;
  j["n"] = data.n();
  j["p"] = data.p();
  json rows = json::array();
  for (int i = 0; i < data.n(); ++i) {
    rows.push_back(vector_to_json(data.design.row(i)));
  }
  j["rows"] = std::move(rows);
  j["response"] = vector_to_json(data.response);
  if (data.truth) {
    j["theta"] = vector_to_json(data.truth->theta);
    j["sigma"] = data.truth->sigma;
  } else {
    j["theta"] = json::array();
    j["sigma"] = 0.0;
  }
  j["seed"] = data.seed;
  return j.dump();
}

Dataset dataset_from_json(const std::string& text) {
  const json j = json::parse(text);
  const int n = j.at("n").get<int>();
  const int p = j.at("p").get<int>();
  Eigen::MatrixXd rows(n, p);
  {
    int i = 0;
    for (const auto& row : j.at("rows")) {
      if (static_cast<int>(row.size()) != p) {
        throw IoFailure("dataset row has wrong length");
      }
      rows.row(i++) = vector_from_json(row).transpose();
    }
    if (i != n) {
      throw IoFailure("dataset row count mismatch");
    }
  }
  Eigen::VectorXd response = vector_from_json(j.at("response"));
  if (response.size() != n) {
    throw IoFailure("dataset response length mismatch");
  }

  std::optional<GroundTruth> truth;
  const auto& theta = j.at("theta");
  if (!theta.empty()) {
    truth = GroundTruth::make(vector_from_json(theta), j.at("sigma").get<double>(),
                              NoiseFamily::gaussian());
  }
  const auto seed = j.at("seed").get<std::uint64_t>();

  DesignMatrix design = DesignMatrix::from_rows(std::move(rows));
  // Noise draw is recoverable only for a positive noise scale.
  Eigen::VectorXd noise = Eigen::VectorXd::Zero(n);
  if (truth && truth->sigma > 0.0) {
    noise = (response - design.matrix() * truth->theta) / truth->sigma;
  }
  return Dataset{std::move(design), std::move(response), std::move(noise), std::move(truth),
                 seed};
}

std::string path_to_json(const LassoPath& path) {
  json j;
  j["knots"] = path.knots();
  json segments = json::array();
  for (const PathSegment& seg : path.segments()) {
    json s;
    s["lo"] = seg.lambda_lo;
    s["hi"] = seg.lambda_hi;
    s["active"] = seg.active_set;
    s["signs"] = seg.signs;
    s["a"] = vector_to_json(seg.intercept);
    s["b"] = vector_to_json(seg.slope);
    segments.push_back(std::move(s));
  }
  j["segments"] = std::move(segments);
  return j.dump();
}

LassoPath path_from_json(const std::string& text) {
  const json j = json::parse(text);
  std::vector<double> knots = j.at("knots").get<std::vector<double>>();
  std::vector<PathSegment> segments;
  int p = 0;
  for (const auto& s : j.at("segments")) {
    PathSegment seg;
    seg.lambda_lo = s.at("lo").get<double>();
    seg.lambda_hi = s.at("hi").get<double>();
    seg.active_set = s.at("active").get<std::vector<int>>();
    seg.signs = s.at("signs").get<std::vector<int>>();
    seg.intercept = vector_from_json(s.at("a"));
    seg.slope = vector_from_json(s.at("b"));
    p = static_cast<int>(seg.intercept.size());
    segments.push_back(std::move(seg));
  }
  if (segments.empty() && knots.size() != 1) {
    throw IoFailure("path without segments must have a single knot");
  }
  return LassoPath(std::move(knots), std::move(segments), p);
}

std::string cv_summary_json(const CvCurve& curve) {
  json j;
  j["lambda_hat"] = curve.lambda_hat();
  j["min_cv_risk"] = curve.min_value();
  j["lambda_top"] = curve.lambda_top();
  return j.dump();
}

}  // namespace lassocv
