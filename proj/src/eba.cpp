#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "contagion/scenarios.hpp"

namespace contagion {

namespace {

constexpr std::string_view kHeader =
    "bank_id,total_assets,interbank_assets,interbank_liabilities,external_liabilities";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double number(const std::string& cell, std::size_t line, const char* column) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v) || v < 0.0) {
    throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(line) + ": bad " + column +
                                             " '" + cell + "'");
  }
  return v;
}

}  // namespace

EbaData read_eba_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedCsv, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedCsv, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw Error(ErrorCode::MalformedCsv, "unexpected header '" + line + "'");

  EbaData data;
  for (std::size_t n = 2; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 5) {
      throw Error(ErrorCode::MalformedCsv,
                  "line " + std::to_string(n) + ": expected 5 fields, got " +
                      std::to_string(cells.size()));
    }
    EbaBank b{cells[0], number(cells[1], n, "total_assets"), number(cells[2], n, "interbank_assets"),
              number(cells[3], n, "interbank_liabilities"),
              number(cells[4], n, "external_liabilities")};
    if (b.interbank_assets > b.total_assets) {
      throw Error(ErrorCode::MalformedCsv,
                  "line " + std::to_string(n) + ": interbank assets exceed total assets");
    }
    data.banks.push_back(std::move(b));
  }
  if (data.banks.size() < 2) throw Error(ErrorCode::MalformedCsv, "need at least two banks");
  allocate_interbank(data.banks, &data.warnings);
  return data;
}

Matrix allocate_interbank(const std::vector<EbaBank>& banks, std::vector<std::string>* warnings) {
  const std::size_t n = banks.size();
  double total_assets = 0.0;
  double total_liabilities = 0.0;
  for (const auto& b : banks) {
    total_assets += b.interbank_assets;
    total_liabilities += b.interbank_liabilities;
  }
  Matrix l(n, n, 0.0);
  if (total_assets <= 0.0 || total_liabilities <= 0.0) return l;

  // Row shares use interbank assets, row totals the liabilities, so a
  // mismatch amounts to rescaling the asset side.
  if (std::abs(total_assets - total_liabilities) > 0.01 * std::max(total_assets, total_liabilities)) {
    const double scale = total_liabilities / total_assets;
    if (warnings) {
      std::ostringstream msg;
      msg << "interbank assets (" << total_assets << ") and liabilities (" << total_liabilities
          << ") differ by more than 1%; rescaling assets by " << scale;
      warnings->push_back(msg.str());
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      l(i, j) = banks[i].interbank_liabilities * banks[j].interbank_assets / total_assets;
      off += l(i, j);
    }
    // Move what would sit on the diagonal onto the rest of the row, keeping
    // the row total equal to the bank's interbank liabilities.
    if (off > 0.0) {
      const double factor = banks[i].interbank_liabilities / off;
      for (std::size_t j = 0; j < n; ++j) l(i, j) *= factor;
    }
  }
  return l;
}

ClearingProblem ingest_eba(const EbaData& data, double liquid_fraction, const EbaModel& model) {
  if (!(liquid_fraction >= 0.0 && liquid_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "liquid fraction must lie in [0, 1]");
  }
  const std::size_t n = data.banks.size();
  const Matrix interbank = allocate_interbank(data.banks, nullptr);
  FinancialSystem sys;
  sys.liabilities = Matrix(n, n + 1, 0.0);
  sys.liquid.resize(n);
  sys.holdings = Matrix(n, 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = data.banks[i];
    const double external = b.total_assets - b.interbank_assets;
    sys.liquid[i] = liquid_fraction * external;
    sys.holdings(i, 0) = external - sys.liquid[i];
    sys.liabilities(i, 0) = b.external_liabilities;
    for (std::size_t j = 0; j < n; ++j) sys.liabilities(i, j + 1) = interbank(i, j);
  }
  LinearImpactParams p;
  p.mu = {1.0};
  p.cov = Matrix(1, 1, 1.0);
  p.alpha0 = model.alpha0;
  p.bank_alpha = Vector(n, model.alpha);
  p.rule = model.rule;
  return ClearingProblem(std::move(sys), InverseDemandModel::linear(std::move(p)));
}

ClearingProblem ingest_eba(const std::filesystem::path& path, double liquid_fraction,
                           const EbaModel& model) {
  return ingest_eba(read_eba_csv(path), liquid_fraction, model);
}

}  // namespace contagion
