#pragma once

#include <filesystem>

#include "dqe/json_util.hpp"
#include "dqe/tabular.hpp"

namespace dqe {

// Directory layout: one `<table>.schema.json` sidecar per table plus a
// matching `<table>.csv` (header row mandatory, empty field = NULL). A
// sidecar without a CSV loads as an empty table. Parse failures carry
// table/row/column coordinates; the loaded warehouse satisfies every
// structural invariant.
Warehouse load_warehouse(const std::filesystem::path& root);

// Inverse of load_warehouse: canonical CSVs and sidecars, constraints
// stored with their owning (child) table. load(save(w)) == w.
void save_warehouse(const Warehouse& warehouse, const std::filesystem::path& root);

// Sidecar pieces, exposed for the model/bindings layers.
Json table_schema_to_json(const TableSchema& schema,
                          const std::vector<Constraint>& constraints);
void table_schema_from_json(const Json& j, const std::string& source,
                            TableSchema& schema_out,
                            std::vector<Constraint>& constraints_out);

// Parses one CSV record into typed cells for the given schema.
// `row_index` is only used in error messages.
Row parse_row(const std::vector<std::string>& fields, const TableSchema& schema,
              std::size_t row_index);

}  // namespace dqe
