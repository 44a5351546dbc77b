#include "subscan/dataio.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "subscan/errors.hpp"

namespace subscan {

using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// JSON emission. nlohmann prints the shortest round-trip form for doubles;
// result files use a fixed 17 significant digits instead, so scalars are
// formatted here and containers recursed over.

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_flat(const json& j) {
  for (const auto& item : j) {
    if (item.is_structured()) return false;
  }
  return true;
}

void emit(const json& j, std::string& out, int level) {
  const std::string pad(static_cast<std::size_t>(level + 1) * 2, ' ');
  const std::string close_pad(static_cast<std::size_t>(level) * 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + json(it.key()).dump() + ": ";
      emit(it.value(), out, level + 1);
    }
    out += "\n" + close_pad + "}";
  } else if (j.is_array()) {
    if (is_flat(j)) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        emit(j[i], out, level + 1);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      emit(j[i], out, level + 1);
    }
    out += "\n" + close_pad + "]";
  } else if (j.is_number_float()) {
    out += format_double(j.get<double>());
  } else {
    out += j.dump();
  }
}

std::string to_text(const json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw CorruptionError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

// Wraps schema access so malformed documents surface as ValidationError.
template <typename F>
auto with_schema(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ValidationError(std::string(what) + " does not match the expected schema: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// .actmat

struct Header {
  std::string kind;
  std::string layer_id;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t background_size = 0;
  std::vector<std::string> sample_ids;
};

std::string encode(const Header& h, const Matrix& values) {
  json header;
  header["format_version"] = kActmatFormatVersion;
  header["layer_id"] = h.layer_id;
  header["num_samples"] = h.rows;
  header["num_nodes"] = h.cols;
  header["dtype"] = "f32";
  header["byte_order"] = "little";
  header["row_major"] = true;
  header["kind"] = h.kind;
  if (h.kind == "pvalues") header["background_size"] = h.background_size;
  if (!h.sample_ids.empty()) header["sample_ids"] = h.sample_ids;

  std::string out = header.dump();
  out += '\n';
  out.reserve(out.size() + values.data().size() * 4);
  for (const double v : values.data()) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    for (int b = 0; b < 4; ++b) out += static_cast<char>((bits >> (8 * b)) & 0xFFu);
  }
  return out;
}

std::size_t positive_count(const json& header, const char* key) {
  if (!header.contains(key) || !header[key].is_number_integer()) {
    throw ValidationError(std::string("actmat header field '") + key + "' missing or not an integer");
  }
  if (header[key].is_number_unsigned() || header[key].get<std::int64_t>() > 0) {
    const auto v = header[key].get<std::uint64_t>();
    if (v > 0) return static_cast<std::size_t>(v);
  }
  throw ValidationError(std::string("actmat header field '") + key + "' must be positive");
}

std::string string_field(const json& header, const char* key) {
  if (!header.contains(key) || !header[key].is_string()) {
    throw ValidationError(std::string("actmat header field '") + key + "' missing or not a string");
  }
  return header[key].get<std::string>();
}

bool is_csv(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".csv";
}

// ---------------------------------------------------------------------------
// JSON <-> domain types

json config_json(const ScanConfig& config, std::span<const double> grid) {
  json j;
  j["alpha_grid"] = config.alpha_grid.to_string();
  j["alpha_max"] = config.alpha_max;
  j["restarts"] = config.restarts;
  j["max_iterations"] = config.max_iterations;
  j["seed"] = config.seed;
  if (!grid.empty()) j["resolved_alpha_grid"] = std::vector<double>(grid.begin(), grid.end());
  return j;
}

ScanConfig config_from(const json& j) {
  ScanConfig c;
  c.alpha_grid = AlphaGridSpec::parse(j.at("alpha_grid").get<std::string>());
  c.alpha_max = j.at("alpha_max").get<double>();
  c.restarts = j.at("restarts").get<std::size_t>();
  c.max_iterations = j.at("max_iterations").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.validate();
  return c;
}

json result_body(const ScanResult& r) {
  json j;
  auto samples = r.sample_indices;
  auto nodes = r.node_indices;
  std::sort(samples.begin(), samples.end());
  std::sort(nodes.begin(), nodes.end());
  j["score"] = r.score;
  j["sample_indices"] = samples;
  j["node_indices"] = nodes;
  j["alpha"] = r.alpha;
  j["n"] = r.n;
  j["n_alpha"] = r.n_alpha;
  j["iterations_used"] = r.iterations_used;
  j["restart_index"] = r.restart_index;
  return j;
}

ScanResult result_from(const json& j) {
  ScanResult r;
  r.score = j.at("score").get<double>();
  r.sample_indices = j.at("sample_indices").get<std::vector<std::size_t>>();
  r.node_indices = j.at("node_indices").get<std::vector<std::size_t>>();
  r.alpha = j.at("alpha").get<double>();
  r.n = j.at("n").get<std::size_t>();
  r.n_alpha = j.at("n_alpha").get<std::size_t>();
  r.iterations_used = j.at("iterations_used").get<std::size_t>();
  r.restart_index = j.at("restart_index").get<std::size_t>();
  return r;
}

json cardinalities_json(const std::vector<Cardinality>& sizes) {
  json arr = json::array();
  for (const auto& c : sizes) arr.push_back({c.samples, c.nodes});
  return arr;
}

std::vector<Cardinality> cardinalities_from(const json& arr) {
  std::vector<Cardinality> out;
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 2) throw ValidationError("cardinality entry must be [samples, nodes]");
    out.push_back({item[0].get<std::size_t>(), item[1].get<std::size_t>()});
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string encode_actmat(const ActivationMatrix& matrix) {
  Header h{"activations", matrix.layer_id(), matrix.num_samples(), matrix.num_nodes(), 0,
           matrix.sample_ids()};
  return encode(h, matrix.values());
}

std::string encode_actmat(const PValueMatrix& matrix) {
  Header h{"pvalues", matrix.layer_id(), matrix.rows(), matrix.cols(), matrix.background_size(),
           matrix.sample_ids()};
  return encode(h, matrix.values());
}

AnyMatrix decode_actmat(const std::string& bytes) {
  const auto newline = bytes.find('\n');
  if (newline == std::string::npos) throw CorruptionError("actmat header line is not terminated by LF");
  const json header = parse_json(bytes.substr(0, newline), "actmat header");
  if (!header.is_object()) throw CorruptionError("actmat header is not a JSON object");

  if (!header.contains("format_version") || !header["format_version"].is_number_integer()) {
    throw VersionError("actmat header has no integer format_version");
  }
  if (header["format_version"].get<std::int64_t>() != kActmatFormatVersion) {
    throw VersionError("unsupported actmat format_version " + header["format_version"].dump() +
                       " (this build reads version " + std::to_string(kActmatFormatVersion) + ")");
  }
  if (string_field(header, "dtype") != "f32") throw ValidationError("actmat dtype must be \"f32\"");
  if (string_field(header, "byte_order") != "little") {
    throw ValidationError("actmat byte_order must be \"little\"");
  }
  if (!header.contains("row_major") || header["row_major"] != true) {
    throw ValidationError("actmat row_major must be true");
  }
  const std::string kind = string_field(header, "kind");
  if (kind != "activations" && kind != "pvalues") {
    throw ValidationError("actmat kind \"" + kind + "\" is not \"activations\" or \"pvalues\"");
  }
  const std::size_t rows = positive_count(header, "num_samples");
  const std::size_t cols = positive_count(header, "num_nodes");
  std::size_t background_size = 0;
  if (kind == "pvalues") {
    if (!header.contains("background_size")) {
      throw ValidationError("actmat kind \"pvalues\" requires background_size");
    }
    background_size = positive_count(header, "background_size");
  } else if (header.contains("background_size")) {
    throw ValidationError("background_size is only allowed for kind \"pvalues\"");
  }
  const std::string layer_id = header.contains("layer_id") ? string_field(header, "layer_id") : "";
  std::vector<std::string> sample_ids;
  if (header.contains("sample_ids")) {
    sample_ids = with_schema("actmat sample_ids",
                             [&] { return header["sample_ids"].get<std::vector<std::string>>(); });
  }

  const std::size_t payload = bytes.size() - newline - 1;
  const std::size_t limit = std::numeric_limits<std::size_t>::max() / 4;
  if (rows > limit / cols || payload != 4 * rows * cols) {
    const std::string expected =
        rows > limit / cols ? std::string("an impossible number of") : std::to_string(4 * rows * cols);
    throw CorruptionError("actmat payload is " + std::to_string(payload) + " bytes; expected " +
                          expected + " bytes for " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " binary32 values");
  }

  std::vector<double> values(rows * cols);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + newline + 1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint32_t bits = std::uint32_t{p[4 * i]} | std::uint32_t{p[4 * i + 1]} << 8 |
                               std::uint32_t{p[4 * i + 2]} << 16 | std::uint32_t{p[4 * i + 3]} << 24;
    const float f = std::bit_cast<float>(bits);
    if (!std::isfinite(f)) {
      throw ValidationError("non-finite value at row " + std::to_string(i / cols) + ", column " +
                            std::to_string(i % cols));
    }
    values[i] = static_cast<double>(f);
  }

  Matrix m(rows, cols, std::move(values));
  if (kind == "pvalues") return PValueMatrix(std::move(m), background_size, layer_id, sample_ids);
  return ActivationMatrix(std::move(m), layer_id, sample_ids);
}

ActivationMatrix parse_csv_matrix(const std::string& text, const std::string& layer_id) {
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  auto strip_cr = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };

  std::vector<std::string> labels;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (!line.empty()) {
      labels = split(line);
      break;
    }
  }
  if (labels.empty()) throw ValidationError("CSV matrix has no header row");
  const std::size_t cols = labels.size();

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != cols) {
      throw ValidationError("CSV line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " fields; header has " +
                            std::to_string(cols));
    }
    for (const auto& cell : cells) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      const bool consumed = end != cell.c_str() && *end == '\0';
      if (!consumed || !std::isfinite(v) || !std::isfinite(static_cast<float>(v))) {
        throw ValidationError("CSV line " + std::to_string(line_no) + ": '" + cell +
                              "' is not a finite number");
      }
      values.push_back(static_cast<double>(static_cast<float>(v)));
    }
    ++rows;
  }
  if (rows == 0) throw ValidationError("CSV matrix has no data rows");
  return ActivationMatrix(Matrix(rows, cols, std::move(values)), layer_id);
}

std::string format_csv_matrix(const ActivationMatrix& matrix) {
  std::string out;
  for (std::size_t c = 0; c < matrix.num_nodes(); ++c) {
    if (c) out += ',';
    out += "node_" + std::to_string(c);
  }
  out += '\n';
  char buf[32];
  for (std::size_t r = 0; r < matrix.num_samples(); ++r) {
    for (std::size_t c = 0; c < matrix.num_nodes(); ++c) {
      if (c) out += ',';
      std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(static_cast<float>(matrix.values()(r, c))));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_actmat(const ActivationMatrix& matrix, const std::filesystem::path& path) {
  write_text_file(is_csv(path) ? format_csv_matrix(matrix) : encode_actmat(matrix), path);
}

void write_actmat(const PValueMatrix& matrix, const std::filesystem::path& path) {
  if (is_csv(path)) {
    throw ValidationError("p-value matrices are stored as .actmat only ('" + path.string() + "')");
  }
  write_text_file(encode_actmat(matrix), path);
}

AnyMatrix read_actmat(const std::filesystem::path& path) {
  const std::string bytes = read_text_file(path);
  if (is_csv(path)) return parse_csv_matrix(bytes, path.stem().string());
  return decode_actmat(bytes);
}

ActivationMatrix read_activations(const std::filesystem::path& path) {
  auto any = read_actmat(path);
  if (auto* m = std::get_if<ActivationMatrix>(&any)) return std::move(*m);
  throw ValidationError("'" + path.string() + "' holds p-values; expected kind \"activations\"");
}

PValueMatrix read_pvalues(const std::filesystem::path& path) {
  auto any = read_actmat(path);
  if (auto* m = std::get_if<PValueMatrix>(&any)) return std::move(*m);
  throw ValidationError("'" + path.string() + "' holds activations; expected kind \"pvalues\"");
}

std::string result_to_json(const ScanResult& result, const ScanConfig& config,
                           std::span<const double> alpha_grid) {
  json j = result_body(result);
  j["config"] = config_json(config, alpha_grid);
  return to_text(j);
}

std::string results_to_json(std::span<const ScanResult> results, const ScanConfig& config,
                            std::span<const double> alpha_grid) {
  json j;
  j["results"] = json::array();
  for (const auto& r : results) j["results"].push_back(result_body(r));
  j["config"] = config_json(config, alpha_grid);
  return to_text(j);
}

std::string report_to_json(const PowerReport& report) {
  json j;
  j["mode"] = report.mode == PowerReport::Mode::kGroup ? "group" : "individual";
  j["auroc"] = report.auroc;
  j["anomalous_count"] = report.anomalous_count;
  j["positive_scores"] = report.positive_scores;
  j["negative_scores"] = report.negative_scores;
  j["positive_cardinalities"] = cardinalities_json(report.positive_cardinalities);
  j["negative_cardinalities"] = cardinalities_json(report.negative_cardinalities);
  json c;
  c["proportion"] = report.config.proportion;
  c["group_size"] = report.config.group_size;
  c["trials"] = report.config.trials;
  c["seed"] = report.config.seed;
  c["with_replacement"] = report.config.with_replacement;
  c["scan"] = config_json(report.config.scan_config, {});
  j["config"] = c;
  return to_text(j);
}

StoredResult result_from_json(const std::string& text) {
  const json j = parse_json(text, "result file");
  return with_schema("result file", [&] {
    StoredResult out;
    out.result = result_from(j);
    out.config = config_from(j.at("config"));
    if (j.at("config").contains("resolved_alpha_grid")) {
      out.alpha_grid = j.at("config").at("resolved_alpha_grid").get<std::vector<double>>();
    }
    return out;
  });
}

std::vector<ScanResult> results_from_json(const std::string& text) {
  const json j = parse_json(text, "result file");
  return with_schema("result file", [&] {
    std::vector<ScanResult> out;
    for (const auto& item : j.at("results")) out.push_back(result_from(item));
    return out;
  });
}

PowerReport report_from_json(const std::string& text) {
  const json j = parse_json(text, "power report");
  return with_schema("power report", [&] {
    PowerReport r;
    const auto mode = j.at("mode").get<std::string>();
    if (mode != "group" && mode != "individual") throw ValidationError("unknown report mode " + mode);
    r.mode = mode == "group" ? PowerReport::Mode::kGroup : PowerReport::Mode::kIndividual;
    r.auroc = j.at("auroc").get<double>();
    r.anomalous_count = j.at("anomalous_count").get<std::size_t>();
    r.positive_scores = j.at("positive_scores").get<std::vector<double>>();
    r.negative_scores = j.at("negative_scores").get<std::vector<double>>();
    r.positive_cardinalities = cardinalities_from(j.at("positive_cardinalities"));
    r.negative_cardinalities = cardinalities_from(j.at("negative_cardinalities"));
    const auto& c = j.at("config");
    r.config.proportion = c.at("proportion").get<double>();
    r.config.group_size = c.at("group_size").get<std::size_t>();
    r.config.trials = c.at("trials").get<std::size_t>();
    r.config.seed = c.at("seed").get<std::uint64_t>();
    r.config.with_replacement = c.at("with_replacement").get<bool>();
    r.config.scan_config = config_from(c.at("scan"));
    return r;
  });
}

void write_result(const ScanResult& result, const ScanConfig& config,
                  std::span<const double> alpha_grid, const std::filesystem::path& path) {
  write_text_file(result_to_json(result, config, alpha_grid), path);
}

void write_result(const PowerReport& report, const std::filesystem::path& path) {
  write_text_file(report_to_json(report), path);
}

}  // namespace subscan
