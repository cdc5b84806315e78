#include "discofield/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace discofield {

CheckRow bounded(std::string id, std::string eq_ref, double value, double tol) {
  return {std::move(id), std::move(eq_ref), value, tol, value <= tol};
}

CheckRow floored(std::string id, std::string eq_ref, double value, double floor) {
  return {std::move(id), std::move(eq_ref), value, floor, value >= floor};
}

CheckRow informational(std::string id, std::string eq_ref, double value) {
  return {std::move(id), std::move(eq_ref), value, -1.0, true};
}

bool RunReport::all_pass() const {
  if (computation_error) return false;
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckRow& row) { return row.pass; });
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<std::string>& equation_registry() {
  static const std::vector<std::string> registry = {
      "1.1", "1.3", "1.5",  "1.6",  "1.7",  "2.1",  "2.2",  "2.3",  "2.4",
      "2.6", "2.7", "2.8",  "2.9",  "2.10", "2.11", "2.12", "2.13", "2.15",
      "2.17", "2.18", "2.19", "3.2", "3.3",  "3.5",  "3.7",  "3.9",  "3.10",
      "3.11", "3.13", "4.2", "4.3",  "4.4",  "4.5",  "4.6",  "4.7",  "4.8",
      "4.9", "4.10", "4.11", "4.12", "4.13", "4.14", "4.15", "4.19", "4.20",
      "n/a"};
  return registry;
}

bool eq_ref_known(const std::string& eq_ref) {
  const auto& reg = equation_registry();
  return std::find(reg.begin(), reg.end(), eq_ref) != reg.end();
}

namespace {

// Minimal ordered JSON emitter; nlohmann stays on the parsing side so the
// report bytes are fully under our control.
class JsonWriter {
 public:
  explicit JsonWriter(int indent = 0) : indent_(indent) {}

  void open_object() { punctuate(); out_ << "{"; push(); }
  void close_object() { pop(); newline(); out_ << "}"; value_done(); }
  void open_array(const std::string& key) { open_key(key); out_ << "["; push(); }
  void close_array() { pop(); newline(); out_ << "]"; value_done(); }
  void open_object(const std::string& key) { open_key(key); out_ << "{"; push(); }

  void field(const std::string& key, const std::string& v) {
    open_key(key);
    out_ << quote(v);
    value_done();
  }
  void field_raw(const std::string& key, const std::string& raw) {
    open_key(key);
    out_ << raw;
    value_done();
  }
  void field(const std::string& key, double v) { field_raw(key, format_float(v)); }
  void field(const std::string& key, long long v) { field_raw(key, std::to_string(v)); }
  void field(const std::string& key, bool v) { field_raw(key, v ? "true" : "false"); }

  void element_raw(const std::string& raw) {
    punctuate();
    newline();
    out_ << raw;
    value_done();
  }
  std::string str() const { return out_.str(); }

  static std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
          } else {
            out += c;
          }
      }
    }
    out += "\"";
    return out;
  }

 private:
  void open_key(const std::string& key) {
    punctuate();
    newline();
    out_ << quote(key) << ": ";
  }
  void punctuate() {
    if (need_comma_) out_ << ",";
    need_comma_ = false;
  }
  void newline() {
    out_ << "\n";
    for (int i = 0; i < indent_; ++i) out_ << "  ";
  }
  void value_done() { need_comma_ = true; }
  void push() { ++indent_; need_comma_ = false; }
  void pop() { --indent_; need_comma_ = false; }

  std::ostringstream out_;
  int indent_;
  bool need_comma_ = false;
};

void emit_config(JsonWriter& w, const RunConfig& cfg) {
  w.open_array("B");
  for (int mu = 0; mu < 4; ++mu) {
    std::string row = "[";
    for (int nu = 0; nu < 4; ++nu) {
      row += format_float(cfg.b(mu, nu));
      if (nu < 3) row += ", ";
    }
    row += "]";
    w.element_raw(row);
  }
  w.close_array();

  auto number_list = [](const auto& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
      out += format_float(static_cast<double>(values[i]));
      if (i + 1 < values.size()) out += ", ";
    }
    return out + "]";
  };
  auto int_list = [](const auto& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
      out += std::to_string(values[i]);
      if (i + 1 < values.size()) out += ", ";
    }
    return out + "]";
  };

  w.field_raw("X", number_list(cfg.x_up));
  w.field_raw("Pvec", number_list(cfg.p_spatial));
  w.field("P0", cfg.means().p_dn[0]);  // always materialized
  w.field("M", cfg.mass_m);
  w.field("T", cfg.mass_t);
  w.field("dm", cfg.dm);

  w.open_object("oneD");
  w.field("X", cfg.one_d.mean_x);
  w.field("P", cfg.one_d.mean_p);
  w.field("dp", cfg.one_d.sigma_p);
  w.field("basis_n", static_cast<long long>(cfg.one_d.basis_n));
  w.close_object();

  w.open_object("cutoffs");
  w.field_raw("tensor", int_list(cfg.cutoffs.tensor));
  w.field("tau", static_cast<long long>(cfg.cutoffs.tau));
  w.field_raw("fermion", int_list(cfg.cutoffs.fermion));
  w.close_object();

  w.open_object("grid");
  w.field("points", static_cast<long long>(cfg.grid.points));
  w.field("halfwidth", cfg.grid.halfwidth);
  w.close_object();

  w.open_object("quadrature");
  w.field("order", static_cast<long long>(cfg.quadrature.order));
  w.field("fallback_points", static_cast<long long>(cfg.quadrature.fallback_points));
  w.field("fallback_halfwidth", cfg.quadrature.fallback_halfwidth);
  w.close_object();

  w.field("cap", static_cast<long long>(cfg.cutoff_cap));
  w.field("seed", static_cast<long long>(cfg.seed));
  w.field("output_dir", cfg.output_dir);
  w.field("tolerance_scale", cfg.tolerance_scale);
  w.field("resonance_max_n", static_cast<long long>(cfg.resonance_max_n));
  w.field("exponent_variant", cfg.exponent_variant);
}

}  // namespace

std::string canonical_config_json(const RunConfig& cfg, int indent) {
  JsonWriter w(indent);
  w.open_object();
  emit_config(w, cfg);
  w.close_object();
  return w.str();
}

std::string report_json(const RunReport& report) {
  JsonWriter w;
  w.open_object();
  w.field("version", report.version);
  w.field("command", report.command);
  w.field("computation_error", report.computation_error);
  w.field("all_pass", report.all_pass());
  w.open_object("config");
  emit_config(w, report.config);
  w.close_object();
  w.open_array("checks");
  for (const auto& row : report.checks) {
    std::ostringstream line;
    line << "{\"id\": " << JsonWriter::quote(row.id)
         << ", \"eq_ref\": " << JsonWriter::quote(row.eq_ref)
         << ", \"value\": " << format_float(row.value)
         << ", \"tolerance\": " << format_float(row.tolerance)
         << ", \"pass\": " << (row.pass ? "true" : "false") << "}";
    w.element_raw(line.str());
  }
  w.close_array();
  w.close_object();
  std::string out = w.str();
  out += "\n";
  return out;
}

std::string report_csv(const RunReport& report) {
  std::string out = "check_id,eq_ref,value,tolerance,pass\n";
  for (const auto& row : report.checks) {
    std::string id = row.id;
    std::replace(id.begin(), id.end(), ',', ';');
    out += id + "," + row.eq_ref + "," + format_float(row.value) + "," +
           format_float(row.tolerance) + "," + (row.pass ? "true" : "false") +
           "\n";
  }
  return out;
}

void write_report_files(const RunReport& report,
                        const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream f(out_dir / (report.command + ".report.json"),
                    std::ios::binary);
    f << report_json(report);
  }
  {
    std::ofstream f(out_dir / (report.command + ".checks.csv"), std::ios::binary);
    f << report_csv(report);
  }
  {
    std::ofstream f(out_dir / (report.command + ".timing.txt"));
    f << "wall_seconds " << format_float(report.wall_seconds) << "\n";
  }
}

}  // namespace discofield
