#include "ddekoop/serialize.hpp"

#include <fstream>
#include <iterator>

#include "json.hpp"

#include "ddekoop/error.hpp"

namespace ddekoop {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> data(m.data(), m.data() + m.size());  // column-major
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* what) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size()) {
    throw Error(ErrorKind::Io, std::string("surrogate field '") + what + "' has inconsistent shape");
  }
  return Eigen::Map<const Eigen::MatrixXd>(data.data(), rows, cols);
}

}  // namespace

std::vector<std::uint8_t> surrogate_to_bytes(const KoopmanSurrogate& s) {
  const FitReport& r = s.report();
  json doc;
  doc["format"] = kSurrogateFormat;
  doc["version"] = kSurrogateVersion;
  doc["kernel"] = {{"family", "wendland"},
                   {"smoothness", 1},
                   {"ambient_dim", s.kernel().ambient_dim()},
                   {"degree", s.kernel().degree()},
                   {"scale", s.kernel().scale()}};
  doc["dim"] = s.dim();
  doc["points"] = s.points();
  doc["lambda"] = s.gram().jitter();
  doc["centers"] = matrix_to_json(s.centers());
  doc["koopman"] = matrix_to_json(s.koopman());
  doc["report"] = {{"rho", r.rho},
                   {"d", r.d},
                   {"fill_distance", r.fill_distance},
                   {"condition_estimate", r.condition_estimate},
                   {"strategy", r.strategy},
                   {"neighbor_policy", r.neighbor_policy},
                   {"seed", r.seed},
                   {"failed_centers", r.failed_centers},
                   {"residual_norms", r.residual_norms},
                   {"mapped_centers", matrix_to_json(r.mapped_centers)}};
  return json::to_cbor(doc);
}

KoopmanSurrogate surrogate_from_bytes(const std::vector<std::uint8_t>& bytes) {
  json doc;
  try {
    doc = json::from_cbor(bytes);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("surrogate file is not valid CBOR: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kSurrogateFormat) {
      throw Error(ErrorKind::Io, "not a surrogate file");
    }
    const int version = doc.at("version").get<int>();
    if (version != kSurrogateVersion) {
      throw Error(ErrorKind::Io, "unsupported surrogate version " + std::to_string(version));
    }
    const json& k = doc.at("kernel");
    const WendlandKernel kernel(k.at("ambient_dim").get<std::size_t>(), k.at("scale").get<double>());
    if (kernel.degree() != k.at("degree").get<int>()) {
      throw Error(ErrorKind::Io, "stored kernel degree does not match its ambient dimension");
    }

    FitReport report;
    report.dim = doc.at("dim").get<std::size_t>();
    report.points = doc.at("points").get<std::size_t>();
    const json& r = doc.at("report");
    report.rho = r.at("rho").get<double>();
    report.d = r.at("d").get<std::size_t>();
    report.scale = kernel.scale();
    report.fill_distance = r.at("fill_distance").get<double>();
    report.condition_estimate = r.at("condition_estimate").get<double>();
    report.strategy = r.at("strategy").get<std::string>();
    report.neighbor_policy = r.at("neighbor_policy").get<std::string>();
    report.seed = r.at("seed").get<std::uint64_t>();
    report.failed_centers = r.at("failed_centers").get<std::vector<std::size_t>>();
    report.residual_norms = r.at("residual_norms").get<std::vector<double>>();
    report.mapped_centers = matrix_from_json(r.at("mapped_centers"), "mapped_centers");

    Eigen::MatrixXd centers = matrix_from_json(doc.at("centers"), "centers");
    report.centers = static_cast<std::size_t>(centers.cols());
    KoopmanSurrogate s(kernel, std::move(centers), matrix_from_json(doc.at("koopman"), "koopman"),
                       report.dim, report.points, std::move(report));
    if (s.gram().jitter() != doc.at("lambda").get<double>()) {
      throw Error(ErrorKind::Io, "rebuilt Gram factorization needed a different jitter than stored");
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed surrogate file: ") + e.what());
  }
}

void save_surrogate(const std::string& path, const KoopmanSurrogate& surrogate) {
  const auto bytes = surrogate_to_bytes(surrogate);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

KoopmanSurrogate load_surrogate(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::Io, "cannot open surrogate file '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return surrogate_from_bytes(bytes);
}

}  // namespace ddekoop
