#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dqe/agents.hpp"
#include "dqe/cleanse.hpp"
#include "dqe/cli.hpp"
#include "dqe/error.hpp"
#include "dqe/evaluator.hpp"
#include "dqe/lint.hpp"
#include "dqe/quality_model.hpp"
#include "dqe/repository.hpp"
#include "dqe/tabular.hpp"
#include "dqe/tabular_io.hpp"

namespace py = pybind11;
using dqe::Json;

namespace {

// nlohmann <-> python, structurally. Numbers survive as int/float; exact
// rationals that cannot round-trip through a double cross as strings,
// same as in the files.
py::object json_to_py(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null:
      return py::none();
    case Json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case Json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float:
      return py::float_(j.get<double>());
    case Json::value_t::string:
      return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case Json::value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items()) {
        out[py::str(key)] = json_to_py(value);
      }
      return out;
    }
    default:
      throw dqe::InputError("unsupported json value");
  }
}

Json py_to_json(py::handle obj) {
  if (obj.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
  if (py::isinstance<py::int_>(obj)) return obj.cast<std::int64_t>();
  if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
    Json out = Json::array();
    for (py::handle item : obj) out.push_back(py_to_json(item));
    return out;
  }
  if (py::isinstance<py::dict>(obj)) {
    Json out = Json::object();
    for (auto item : obj.cast<py::dict>()) {
      out[item.first.cast<std::string>()] = py_to_json(item.second);
    }
    return out;
  }
  throw dqe::InputError("cannot convert python value to json");
}

dqe::Timestamp parse_ts(const std::string& text) {
  auto ts = dqe::Timestamp::parse(text);
  if (!ts) throw dqe::InputError("bad timestamp '" + text + "'");
  return *ts;
}

std::vector<dqe::Measurement> measurements_from_py(py::object measurements) {
  std::vector<dqe::Measurement> out;
  Json array = py_to_json(measurements);
  for (std::size_t i = 0; i < array.size(); ++i) {
    out.push_back(
        dqe::measurement_from_json(array[i], "measurement " + std::to_string(i)));
  }
  return out;
}

py::object measurements_to_py(const std::vector<dqe::Measurement>& measurements) {
  Json array = Json::array();
  for (const auto& m : measurements) array.push_back(dqe::measurement_to_json(m));
  return json_to_py(array);
}

py::object log_to_py(const dqe::CleansingLog& log) {
  Json array = Json::array();
  for (const auto& entry : log.entries) {
    array.push_back(dqe::cleansing_entry_to_json(entry));
  }
  return json_to_py(array);
}

dqe::CleansingLog log_from_py(py::object entries) {
  dqe::CleansingLog log;
  for (const auto& item : py_to_json(entries)) {
    log.entries.push_back(dqe::cleansing_entry_from_json(item));
  }
  return log;
}

std::vector<dqe::RowTarget> row_targets_from_py(
    const std::vector<std::pair<std::string, std::size_t>>& targets) {
  std::vector<dqe::RowTarget> out;
  for (const auto& [table, row] : targets) out.push_back({table, row});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Metadata-driven data quality engine for tabular warehouses";

  py::register_exception<dqe::Error>(m, "Error", PyExc_RuntimeError);
  static py::exception<dqe::ParseError> parse_exc(m, "ParseError", PyExc_ValueError);
  static py::exception<dqe::InputError> input_exc(m, "InputError", PyExc_ValueError);
  static py::exception<dqe::StorageError> storage_exc(m, "StorageError",
                                                      PyExc_RuntimeError);
  static py::exception<dqe::MeasurementMissingError> missing_exc(
      m, "MeasurementMissingError", PyExc_LookupError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const dqe::ParseError& e) {
      PyErr_SetString(parse_exc.ptr(), e.what());
    } catch (const dqe::InputError& e) {
      PyErr_SetString(input_exc.ptr(), e.what());
    } catch (const dqe::StorageError& e) {
      PyErr_SetString(storage_exc.ptr(), e.what());
    } catch (const dqe::MeasurementMissingError& e) {
      PyErr_SetString(missing_exc.ptr(), e.what());
    }
  });

  py::class_<dqe::Warehouse>(m, "Warehouse")
      .def_property_readonly("tables",
                             [](const dqe::Warehouse& w) {
                               std::vector<std::string> names;
                               for (const auto& [name, schema] : w.schemas) {
                                 names.push_back(name);
                               }
                               return names;
                             })
      .def("row_count",
           [](const dqe::Warehouse& w, const std::string& table) {
             return w.dataset(table).row_count();
           })
      .def("constraint_ids", &dqe::Warehouse::constraint_ids)
      .def("__eq__",
           [](const dqe::Warehouse& a, const dqe::Warehouse& b) { return a == b; })
      .def("__repr__", [](const dqe::Warehouse& w) {
        std::ostringstream out;
        out << "<Warehouse tables=" << w.schemas.size()
            << " constraints=" << w.constraints.size() << ">";
        return out.str();
      });

  py::class_<dqe::QualityModelDoc>(m, "QualityModel")
      .def_static("from_dict",
                  [](py::object doc) { return dqe::model_from_json(py_to_json(doc)); })
      .def("to_dict",
           [](const dqe::QualityModelDoc& model) {
             return json_to_py(dqe::model_to_json(model));
           })
      .def("__repr__", [](const dqe::QualityModelDoc& model) {
        std::ostringstream out;
        out << "<QualityModel goals=" << model.goals.size()
            << " metrics=" << model.metrics.size() << ">";
        return out.str();
      });

  m.def("load_warehouse",
        [](const std::string& root) { return dqe::load_warehouse(root); },
        py::arg("root"));
  m.def("save_warehouse",
        [](const dqe::Warehouse& w, const std::string& root) {
          dqe::save_warehouse(w, root);
        },
        py::arg("warehouse"), py::arg("root"));

  m.def("validate_model",
        [](const dqe::QualityModelDoc& model, const dqe::Warehouse* warehouse) {
          return dqe::validate_model(model, warehouse);
        },
        py::arg("model"), py::arg("warehouse") = nullptr);

  m.def("find_violations",
        [](const dqe::Warehouse& w, std::optional<std::vector<std::string>> ids) {
          Json array = Json::array();
          for (const auto& v :
               dqe::find_violations(w, ids ? *ids : w.constraint_ids())) {
            array.push_back(Json{{"constraint_id", v.constraint_id},
                                 {"table", v.table},
                                 {"row", v.row_index},
                                 {"columns", v.columns},
                                 {"detail", v.detail}});
          }
          return json_to_py(array);
        },
        py::arg("warehouse"), py::arg("constraint_ids") = py::none());

  m.def("audit",
        [](const dqe::Warehouse& w, std::optional<std::vector<std::string>> ids,
           const std::string& now) {
          return json_to_py(dqe::audit_to_json(
              dqe::audit(w, ids ? *ids : w.constraint_ids(), parse_ts(now))));
        },
        py::arg("warehouse"), py::arg("constraint_ids") = py::none(),
        py::arg("now") = "1970-01-01T00:00:00Z");

  m.def("measure",
        [](const dqe::QualityModelDoc& model, const dqe::Warehouse& w,
           py::object declared, const std::string& now) {
          dqe::Timestamp ts = parse_ts(now);
          dqe::DeclaredPool pool;
          if (!declared.is_none()) {
            for (const auto& measurement :
                 dqe::ingest_declared(py_to_json(declared), model, ts)) {
              pool.add(measurement);
            }
          }
          std::vector<std::string> skipped;
          auto measurements = dqe::run_all(model, w, pool, ts, &skipped);
          return py::make_tuple(measurements_to_py(measurements), skipped);
        },
        py::arg("model"), py::arg("warehouse"), py::arg("declared") = py::none(),
        py::arg("now") = "1970-01-01T00:00:00Z");

  m.def("evaluate",
        [](const dqe::QualityModelDoc& model, py::object measurements,
           const std::string& identity, const std::string& now) {
          auto report = dqe::build_report(model, measurements_from_py(measurements),
                                          identity, parse_ts(now));
          return json_to_py(dqe::report_to_json(report));
        },
        py::arg("model"), py::arg("measurements"), py::arg("identity") = "",
        py::arg("now") = "1970-01-01T00:00:00Z");

  m.def("admit",
        [](py::object batch, const dqe::Warehouse& w, const std::string& table,
           std::optional<std::vector<std::string>> ids) {
          if (!w.has_table(table)) {
            throw dqe::InputError("no table '" + table + "' in the warehouse");
          }
          const auto& schema = w.schema(table);
          std::vector<dqe::Row> rows;
          std::size_t index = 0;
          for (py::handle row_obj : batch) {
            std::vector<std::string> fields;
            for (py::handle cell : row_obj) {
              fields.push_back(cell.is_none() ? "" : cell.cast<std::string>());
            }
            rows.push_back(dqe::parse_row(fields, schema, index++));
          }
          auto result =
              dqe::admit(rows, w, table, ids ? *ids : w.constraint_ids());
          Json rejected = Json::array();
          for (const auto& r : result.rejected) {
            rejected.push_back(Json{{"row", r.batch_index}, {"reasons", r.reasons}});
          }
          return py::make_tuple(json_to_py(Json(result.accepted_indices)),
                                json_to_py(rejected));
        },
        py::arg("batch"), py::arg("warehouse"), py::arg("table"),
        py::arg("constraint_ids") = py::none());

  m.def("filter_elements",
        [](const dqe::Warehouse& w,
           const std::vector<std::tuple<std::string, std::size_t, std::string>>&
               targets,
           const std::string& now, const std::string& reason) {
          std::vector<dqe::CellTarget> cells;
          for (const auto& [table, row, column] : targets) {
            cells.push_back({table, row, column});
          }
          dqe::CleansingLog log;
          auto post = dqe::filter_elements(w, cells, log, parse_ts(now), reason);
          return py::make_tuple(post, log_to_py(log));
        },
        py::arg("warehouse"), py::arg("targets"),
        py::arg("now") = "1970-01-01T00:00:00Z", py::arg("reason") = "filtered");

  m.def("filter_rows",
        [](const dqe::Warehouse& w,
           const std::vector<std::pair<std::string, std::size_t>>& targets,
           const std::string& now, const std::string& reason) {
          dqe::CleansingLog log;
          auto post = dqe::filter_rows(w, row_targets_from_py(targets), log,
                                       parse_ts(now), reason);
          return py::make_tuple(post, log_to_py(log));
        },
        py::arg("warehouse"), py::arg("targets"),
        py::arg("now") = "1970-01-01T00:00:00Z", py::arg("reason") = "filtered");

  m.def("filter_groups",
        [](const dqe::Warehouse& w,
           const std::vector<std::pair<std::string, std::size_t>>& seeds,
           const std::string& now, const std::string& reason) {
          dqe::CleansingLog log;
          auto post = dqe::filter_groups(w, row_targets_from_py(seeds), log,
                                         parse_ts(now), reason);
          return py::make_tuple(post, log_to_py(log));
        },
        py::arg("warehouse"), py::arg("seeds"),
        py::arg("now") = "1970-01-01T00:00:00Z", py::arg("reason") = "group seed");

  m.def("correct",
        [](const dqe::Warehouse& w, py::object rules, const std::string& now) {
          auto parsed = dqe::correction_rules_from_json(py_to_json(rules));
          auto violations = dqe::find_violations(w, w.constraint_ids());
          dqe::CleansingLog log;
          auto post = dqe::correct(w, parsed, violations, log, parse_ts(now));
          return py::make_tuple(post, log_to_py(log));
        },
        py::arg("warehouse"), py::arg("rules"),
        py::arg("now") = "1970-01-01T00:00:00Z");

  m.def("replay_log",
        [](const dqe::Warehouse& pre, py::object entries) {
          return dqe::replay_log(pre, log_from_py(entries));
        },
        py::arg("warehouse"), py::arg("entries"));

  m.def("lint_pipeline",
        [](py::object config) {
          auto findings =
              dqe::lint_pipeline(dqe::pipeline_config_from_json(py_to_json(config)));
          return json_to_py(dqe::lint_findings_to_json(findings));
        },
        py::arg("config"));

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          int code = dqe::run_cli(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"),
        "Run a CLI invocation in-process; returns (exit_code, stdout, stderr)");
}
