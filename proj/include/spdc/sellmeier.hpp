#pragma once

#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spdc/core.hpp"

namespace spdc {

// Mirror of data/sellmeier.txt; a test keeps the two identical.
inline constexpr std::string_view kBuiltinSellmeierTable = R"SELL(# Refractive-index models. Wavelength in micrometres.
# pole-quadratic: n^2 = A + B/(l^2 - C) - D l^2
# sellmeier:      n^2 = 1 + sum B_i l^2/(l^2 - C_i^2), coefficients as B1 C1 B2 C2 ...
format = spdc-sellmeier
version = 1

BBO.source = Kato, IEEE J. Quantum Electron. 22, 1013 (1986)
BBO.window_um = 0.189 3.5
BBO.o = pole-quadratic 2.7359 0.01878 0.01822 0.01354
BBO.e = pole-quadratic 2.3753 0.01224 0.01667 0.01516

FusedSilica.source = Malitson, J. Opt. Soc. Am. 55, 1205 (1965)
FusedSilica.window_um = 0.21 3.71
FusedSilica.n = sellmeier 0.6961663 0.0684043 0.4079426 0.1162414 0.8974794 9.896161
)SELL";

enum class SellmeierForm { PoleQuadratic, Sellmeier };

struct SellmeierModel {
  SellmeierForm form = SellmeierForm::PoleQuadratic;
  std::vector<double> coefficients;
  double lambda_min_um = 0.0;
  double lambda_max_um = 0.0;

  void check(double l) const {
    if (!(l >= lambda_min_um && l <= lambda_max_um))
      throw DomainError("wavelength " + std::to_string(l) + " um outside transparency window [" +
                        std::to_string(lambda_min_um) + ", " + std::to_string(lambda_max_um) + "]");
  }

  double n_squared(double l) const {
    check(l);
    const auto& c = coefficients;
    double l2 = l * l;
    if (form == SellmeierForm::PoleQuadratic) return c[0] + c[1] / (l2 - c[2]) - c[3] * l2;
    double s = 1.0;
    for (std::size_t i = 0; i + 1 < c.size(); i += 2) s += c[i] * l2 / (l2 - c[i + 1] * c[i + 1]);
    return s;
  }

  double index(double l) const { return std::sqrt(n_squared(l)); }

  // dn/dlambda, per micrometre
  double dindex(double l) const {
    const auto& c = coefficients;
    double l2 = l * l;
    double dn2 = 0.0;
    if (form == SellmeierForm::PoleQuadratic) {
      double p = l2 - c[2];
      dn2 = -2.0 * l * c[1] / (p * p) - 2.0 * c[3] * l;
    } else {
      for (std::size_t i = 0; i + 1 < c.size(); i += 2) {
        double cc = c[i + 1] * c[i + 1];
        double p = l2 - cc;
        dn2 += -2.0 * l * c[i] * cc / (p * p);
      }
    }
    return dn2 / (2.0 * index(l));
  }
};

struct MaterialModels {
  std::string source;
  double lambda_min_um = 0.0;
  double lambda_max_um = 0.0;
  std::map<std::string, SellmeierModel> models;  // "o", "e" or "n"
};

class SellmeierParseError : public std::runtime_error {
 public:
  SellmeierParseError(int line, const std::string& msg)
      : std::runtime_error("sellmeier table line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class SellmeierTable {
 public:
  static SellmeierTable parse(std::string_view text) {
    SellmeierTable t;
    std::istringstream in{std::string(text)};
    std::string raw;
    int ln = 0;
    bool seen_format = false;
    std::map<std::string, std::vector<std::pair<int, std::string>>> pending;
    while (std::getline(in, raw)) {
      ++ln;
      auto hash = raw.find('#');
      std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) throw SellmeierParseError(ln, "expected key = value");
      std::string key = trim(line.substr(0, eq));
      std::string val = trim(line.substr(eq + 1));
      if (key == "format") {
        if (val != "spdc-sellmeier") throw SellmeierParseError(ln, "unknown format '" + val + "'");
        seen_format = true;
        continue;
      }
      if (key == "version") {
        if (val != "1") throw SellmeierParseError(ln, "unsupported version " + val);
        continue;
      }
      auto dot = key.find('.');
      if (dot == std::string::npos) throw SellmeierParseError(ln, "key must be Material.field");
      std::string mat = key.substr(0, dot);
      std::string field = key.substr(dot + 1);
      auto& m = t.materials_[mat];
      if (field == "source") {
        m.source = val;
      } else if (field == "window_um") {
        auto v = numbers(val, ln);
        if (v.size() != 2 || !(v[0] < v[1])) throw SellmeierParseError(ln, "window_um needs min < max");
        m.lambda_min_um = v[0];
        m.lambda_max_um = v[1];
      } else if (field == "o" || field == "e" || field == "n") {
        pending[mat].emplace_back(ln, field + " " + val);
      } else {
        throw SellmeierParseError(ln, "unknown field '" + field + "'");
      }
    }
    if (!seen_format) throw SellmeierParseError(1, "missing 'format = spdc-sellmeier' header");
    for (auto& [mat, items] : pending) {
      auto& m = t.materials_[mat];
      if (m.lambda_max_um <= 0.0) throw SellmeierParseError(items.front().first, mat + " has no window_um");
      for (auto& [ln2, s] : items) {
        std::istringstream ss(s);
        std::string field, form, rest;
        ss >> field >> form;
        std::getline(ss, rest);
        SellmeierModel model;
        model.coefficients = numbers(rest, ln2);
        model.lambda_min_um = m.lambda_min_um;
        model.lambda_max_um = m.lambda_max_um;
        if (form == "pole-quadratic") {
          model.form = SellmeierForm::PoleQuadratic;
          if (model.coefficients.size() != 4) throw SellmeierParseError(ln2, "pole-quadratic needs 4 coefficients");
        } else if (form == "sellmeier") {
          model.form = SellmeierForm::Sellmeier;
          if (model.coefficients.empty() || model.coefficients.size() % 2)
            throw SellmeierParseError(ln2, "sellmeier needs coefficient pairs");
        } else {
          throw SellmeierParseError(ln2, "unknown form '" + form + "'");
        }
        m.models[field] = std::move(model);
      }
    }
    return t;
  }

  static const SellmeierTable& builtin() {
    static const SellmeierTable t = parse(kBuiltinSellmeierTable);
    return t;
  }

  const MaterialModels& material(const std::string& name) const {
    auto it = materials_.find(name);
    if (it == materials_.end()) throw DomainError("unknown material '" + name + "'");
    return it->second;
  }

  const SellmeierModel& model(const std::string& name, const std::string& field) const {
    const auto& m = material(name);
    auto it = m.models.find(field);
    if (it == m.models.end()) throw DomainError("material '" + name + "' has no '" + field + "' model");
    return it->second;
  }

 private:
  static std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static std::vector<double> numbers(const std::string& s, int ln) {
    std::vector<double> out;
    std::istringstream ss(s);
    std::string tok;
    while (ss >> tok) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size())
        throw SellmeierParseError(ln, "bad number '" + tok + "'");
      out.push_back(v);
    }
    return out;
  }

  std::map<std::string, MaterialModels> materials_;
};

}  // namespace spdc
