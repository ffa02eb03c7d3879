#include "gen.hpp"

namespace dqe::testgen {

namespace {

const std::vector<std::string> kWords = {"alpha", "beta",  "gamma", "delta",
                                         "echo",  "lima",  "mike",  ""};

Cell random_value(Rng& rng, Kind kind) {
  switch (kind) {
    case Kind::Integer: return Cell{rng.pick_int(-5, 60)};
    case Kind::Decimal: {
      Decimal d{rng.pick_int(-500, 500), static_cast<std::int32_t>(rng.pick_int(0, 2))};
      d.normalize();
      return Cell{d};
    }
    case Kind::Text: {
      // Never the empty string: empty text is not representable in CSV.
      std::string w = kWords[rng.pick_index(kWords.size() - 1)];
      return Cell{w};
    }
    case Kind::Timestamp:
      return Cell{Timestamp{1700000000 + rng.pick_int(0, 1000000)}};
    case Kind::Flag: return Cell{rng.chance(0.5)};
  }
  return Cell::null();
}

Kind random_kind(Rng& rng) {
  switch (rng.pick_int(0, 4)) {
    case 0: return Kind::Integer;
    case 1: return Kind::Decimal;
    case 2: return Kind::Text;
    case 3: return Kind::Timestamp;
    default: return Kind::Flag;
  }
}

void add_fk_column(TableSchema& schema, const std::string& name) {
  ColumnSpec fk;
  fk.name = name;
  fk.kind = Kind::Integer;
  fk.nullable = true;
  schema.columns.push_back(fk);
}

}  // namespace

Warehouse make_warehouse(Rng& rng, const WarehouseOptions& opts) {
  Warehouse w;
  std::size_t ntables = 1 + rng.pick_index(opts.max_tables);
  bool cycle = opts.force_cycle && ntables >= 2;

  for (std::size_t t = 0; t < ntables; ++t) {
    TableSchema schema;
    schema.name = "t" + std::to_string(t);
    if (rng.chance(0.6)) schema.description = "table " + schema.name;

    ColumnSpec id;
    id.name = "id";
    id.kind = Kind::Integer;
    id.nullable = false;
    id.required = true;
    if (rng.chance(0.5)) id.description = "row id";
    schema.columns.push_back(id);

    std::size_t extra = rng.pick_index(opts.max_extra_columns + 1);
    for (std::size_t c = 0; c < extra; ++c) {
      ColumnSpec col;
      col.name = "c" + std::to_string(c);
      col.kind = random_kind(rng);
      col.nullable = rng.chance(0.6);
      col.required = rng.chance(0.4);
      if (rng.chance(0.5)) col.description = "column " + col.name;
      if (col.kind == Kind::Integer && rng.chance(0.4)) {
        ValueDomain dom;
        dom.min_value = Cell{static_cast<std::int64_t>(0)};
        dom.max_value = Cell{rng.pick_int(20, 50)};
        col.domain = dom;
      } else if (col.kind == Kind::Text && rng.chance(0.4)) {
        ValueDomain dom;
        dom.values = {Cell{std::string("alpha")}, Cell{std::string("beta")},
                      Cell{std::string("gamma")}};
        col.domain = dom;
      }
      schema.columns.push_back(std::move(col));
    }
    if (rng.chance(0.4)) {
      ColumnSpec tt;
      tt.name = "tt";
      tt.kind = Kind::Timestamp;
      tt.temporal_role = TemporalRole::TransactionTime;
      tt.nullable = true;
      schema.columns.push_back(tt);
    }
    if (rng.chance(0.4)) {
      ColumnSpec vt;
      vt.name = "vt";
      vt.kind = Kind::Timestamp;
      vt.temporal_role = TemporalRole::ValidTime;
      vt.nullable = true;
      schema.columns.push_back(vt);
    }
    if (opts.with_referential && t > 0 && rng.chance(0.8)) {
      add_fk_column(schema, "fk");
    }
    if (cycle && t == 0) {
      add_fk_column(schema, "cyc");  // t0 -> t1, closing the loop
    }
    schema.primary_key = {"id"};
    w.schemas.emplace(schema.name, std::move(schema));
  }

  // Data, parents before children so foreign keys can mostly resolve.
  for (std::size_t t = 0; t < ntables; ++t) {
    std::string name = "t" + std::to_string(t);
    const TableSchema& schema = w.schemas.at(name);
    Dataset ds;
    ds.table = name;
    std::size_t rows = rng.pick_index(opts.max_rows + 1);
    for (std::size_t r = 0; r < rows; ++r) {
      Row row;
      for (const auto& col : schema.columns) {
        bool fk = col.name == "fk" || col.name == "cyc";
        if (!fk && rng.chance(opts.null_rate)) {
          row.push_back(Cell::null());
          continue;
        }
        if (col.name == "id") {
          row.push_back(Cell{rng.pick_int(0, static_cast<std::int64_t>(2 * rows + 4))});
          continue;
        }
        if (fk) {
          std::string parent = col.name == "fk" ? "t" + std::to_string(t - 1) : "t1";
          const Dataset* pds = w.datasets.count(parent) ? &w.datasets.at(parent) : nullptr;
          if (rng.chance(opts.null_rate) || !pds || pds->rows.empty()) {
            row.push_back(Cell::null());
          } else if (rng.chance(opts.dangling_rate)) {
            row.push_back(Cell{rng.pick_int(1000, 2000)});  // nowhere
          } else {
            const Row& pick = pds->rows[rng.pick_index(pds->rows.size())];
            row.push_back(pick[0].is_null() ? Cell::null() : pick[0]);
          }
          continue;
        }
        row.push_back(random_value(rng, col.kind));
      }
      ds.rows.push_back(std::move(row));
    }
    w.datasets.emplace(name, std::move(ds));
  }

  // The "cyc" column on t0 references t1, which is filled after t0;
  // patch it now that t1 has rows.
  if (cycle && w.schemas.at("t0").column_index("cyc")) {
    std::size_t cyc = *w.schemas.at("t0").column_index("cyc");
    const Dataset& t1 = w.datasets.at("t1");
    for (Row& row : w.datasets.at("t0").rows) {
      if (rng.chance(opts.null_rate) || t1.rows.empty()) {
        row[cyc] = Cell::null();
      } else if (rng.chance(opts.dangling_rate)) {
        row[cyc] = Cell{rng.pick_int(1000, 2000)};
      } else {
        const Row& pick = t1.rows[rng.pick_index(t1.rows.size())];
        row[cyc] = pick[0];
      }
    }
  }

  // Constraints.
  for (std::size_t t = 0; t < ntables; ++t) {
    std::string name = "t" + std::to_string(t);
    const TableSchema& schema = w.schemas.at(name);
    if (rng.chance(0.8)) {
      w.constraints.push_back({name + "_id_nn", name, NotNullRule{"id"}});
    }
    if (rng.chance(0.6)) {
      w.constraints.push_back({name + "_id_uq", name, UniqueRule{{"id"}}});
    }
    std::size_t check_n = 0;
    for (const auto& col : schema.columns) {
      if (col.domain && rng.chance(0.8)) {
        w.constraints.push_back({name + "_" + col.name + "_dom", name, DomainRule{col.name}});
      }
      if (col.name != "id" && !col.nullable && rng.chance(0.3)) {
        w.constraints.push_back({name + "_" + col.name + "_nn", name, NotNullRule{col.name}});
      }
      if (col.kind == Kind::Integer && col.name != "id" && col.name != "fk" &&
          col.name != "cyc" && rng.chance(0.5)) {
        CheckRule rule;
        rule.column = col.name;
        rule.op = rng.chance(0.5) ? CheckOp::Ge : CheckOp::Le;
        rule.literal = Cell{rng.pick_int(0, 30)};
        w.constraints.push_back(
            {name + "_chk" + std::to_string(check_n++), name, std::move(rule)});
      }
    }
    if (schema.column_index("fk")) {
      w.constraints.push_back({name + "_fk", name,
                               ReferentialRule{{"fk"}, "t" + std::to_string(t - 1), {"id"}}});
    }
    if (schema.column_index("cyc")) {
      w.constraints.push_back({name + "_cyc", name, ReferentialRule{{"cyc"}, "t1", {"id"}}});
    }
    // An occasional cross-column check between the first two integer columns.
    std::vector<std::string> ints;
    for (const auto& col : schema.columns) {
      if (col.kind == Kind::Integer) ints.push_back(col.name);
    }
    if (ints.size() >= 2 && rng.chance(0.4)) {
      CheckRule rule;
      rule.column = ints[0];
      rule.op = CheckOp::Ge;
      rule.other_column = ints[1];
      w.constraints.push_back({name + "_chk_pair", name, std::move(rule)});
    }
  }

  w.validate();
  return w;
}

QualityModelDoc make_model(Rng& rng, const Warehouse& warehouse) {
  QualityModelDoc model;

  std::size_t nstake = 1 + rng.pick_index(3);
  const StakeholderRole roles[] = {
      StakeholderRole::DecisionMaker, StakeholderRole::DwAdministrator,
      StakeholderRole::DwDesigner, StakeholderRole::DwProgrammer,
      StakeholderRole::ExecutiveManager};
  for (std::size_t i = 0; i < nstake; ++i) {
    Stakeholder s;
    s.id = "s" + std::to_string(i);
    s.name = "stakeholder " + std::to_string(i);
    s.role = roles[rng.pick_index(5)];
    if (rng.chance(0.5)) s.concerns = {"fresh data", "no surprises"};
    model.stakeholders.push_back(std::move(s));
  }

  std::size_t ndims = 1 + rng.pick_index(2);
  for (std::size_t i = 0; i < ndims; ++i) {
    QualityDimension d;
    d.id = "dim" + std::to_string(i);
    d.name = i == 0 ? "believability" : "interpretability";
    if (rng.chance(0.5)) d.description = "a way the data can disappoint";
    model.dimensions.push_back(std::move(d));
  }

  std::vector<std::string> tables;
  for (const auto& [name, schema] : warehouse.schemas) tables.push_back(name);
  auto random_table = [&] { return tables[rng.pick_index(tables.size())]; };
  auto table_with_role = [&](TemporalRole role) -> std::optional<std::string> {
    for (const auto& name : tables) {
      if (warehouse.schema(name).temporal_column(role)) return name;
    }
    return std::nullopt;
  };

  auto random_bound = [&]() -> Rational {
    switch (rng.pick_int(0, 3)) {
      case 0: return Rational::from_int(rng.pick_int(0, 100));
      case 1: return Rational::from_counts(1, 3);
      case 2: return Rational::from_counts(rng.pick_int(0, 200), 2);
      default: return Rational::from_counts(99, 7);
    }
  };
  auto random_interval = [&] {
    Rational a = random_bound(), b = random_bound();
    return a <= b ? Interval{a, b} : Interval{b, a};
  };

  std::size_t nmetrics = 1 + rng.pick_index(5);
  for (std::size_t i = 0; i < nmetrics; ++i) {
    MetricSpec m;
    m.id = "m" + std::to_string(i);
    m.expected = random_interval();
    switch (rng.pick_int(0, 6)) {
      case 0:
        m.parameter = "Completeness";
        m.object = ObjectRef::for_table(random_table());
        m.agent = AutomatedAgent{AgentKind::Completeness};
        m.unit = Unit::Percent;
        break;
      case 1:
        m.parameter = "Accessibility";
        m.object = ObjectRef::for_table(random_table());
        m.agent = AutomatedAgent{AgentKind::Accessibility};
        m.unit = Unit::Count;
        break;
      case 2:
        m.parameter = "Consistency";
        m.object = rng.chance(0.5) ? ObjectRef::warehouse()
                                   : ObjectRef::for_table(random_table());
        m.agent = AutomatedAgent{AgentKind::Consistency};
        m.unit = Unit::Count;
        break;
      case 3:
        m.parameter = "Data Interpretability";
        m.object = ObjectRef::warehouse();
        m.agent = AutomatedAgent{AgentKind::Interpretability};
        m.unit = Unit::Count;
        break;
      case 4: {
        auto tt = table_with_role(TemporalRole::TransactionTime);
        if (tt) {
          m.parameter = "Currency";
          m.object = ObjectRef::for_table(*tt);
          m.agent = AutomatedAgent{AgentKind::Currency};
          m.unit = Unit::Count;
          break;
        }
        [[fallthrough]];
      }
      case 5:
        m.parameter = rng.chance(0.5) ? "Completeness" : "Consistency";
        m.object = ObjectRef::for_table(random_table());
        m.agent = AutomatedAgent{AgentKind::DefectRatio};
        m.unit = Unit::Ratio;
        if (rng.chance(0.4)) {
          m.params = Json{{"predicates", Json::array({Json{{"type", "incomplete_record"}}})}};
        }
        break;
      default:
        m.parameter = rng.chance(0.5) ? "Security" : "Maintainability";
        m.object = rng.chance(0.5) ? ObjectRef::warehouse()
                                   : ObjectRef::for_table(random_table());
        m.agent = DeclaredAgent{"ops review"};
        m.unit = rng.chance(0.5) ? Unit::ManHours : Unit::BooleanCount;
        break;
    }
    model.metrics.push_back(std::move(m));
  }

  // Partition the metrics over 1..3 queries, occasionally repeating one
  // so that resolve_goal's dedup stays exercised.
  std::size_t nqueries = 1 + rng.pick_index(3);
  for (std::size_t i = 0; i < nqueries; ++i) {
    QualityQuery q;
    q.id = "q" + std::to_string(i);
    for (std::size_t j = i; j < nmetrics; j += nqueries) {
      q.metric_ids.push_back("m" + std::to_string(j));
    }
    if (q.metric_ids.empty()) {
      q.metric_ids.push_back("m" + std::to_string(rng.pick_index(nmetrics)));
    }
    if (rng.chance(0.3)) q.metric_ids.push_back(q.metric_ids.front());
    model.queries.push_back(std::move(q));
  }

  std::size_t ngoals = 1 + rng.pick_index(2);
  for (std::size_t i = 0; i < ngoals; ++i) {
    QualityGoal g;
    g.id = "g" + std::to_string(i);
    g.stakeholder_id = model.stakeholders[rng.pick_index(nstake)].id;
    g.dimension_id = model.dimensions[rng.pick_index(ndims)].id;
    if (rng.chance(0.7)) g.purpose = "keep the numbers honest";
    g.object = rng.chance(0.5) ? ObjectRef::warehouse()
                               : ObjectRef::for_table(random_table());
    for (std::size_t q = 0; q < nqueries; ++q) {
      if (q == i % nqueries || rng.chance(0.4)) {
        g.query_ids.push_back("q" + std::to_string(q));
      }
    }
    model.goals.push_back(std::move(g));
  }

  return model;
}

std::vector<Row> make_batch(Rng& rng, const Warehouse& warehouse,
                            const std::string& table, std::size_t rows) {
  const TableSchema& schema = warehouse.schema(table);
  std::vector<Row> batch;
  for (std::size_t r = 0; r < rows; ++r) {
    Row row;
    for (const auto& col : schema.columns) {
      if (rng.chance(0.2)) {
        row.push_back(Cell::null());
      } else if (col.name == "fk" || col.name == "cyc") {
        row.push_back(Cell{rng.pick_int(0, 40)});
      } else {
        row.push_back(random_value(rng, col.kind));
      }
    }
    batch.push_back(std::move(row));
  }
  return batch;
}

}  // namespace dqe::testgen
