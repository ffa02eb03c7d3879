#pragma once

// Hand-built fixture warehouses with known, countable defects.

#include <string>

#include "dqe/tabular.hpp"

namespace dqe::testfix {

inline ColumnSpec col(std::string name, Kind kind, bool nullable = true,
                      bool required = false) {
  ColumnSpec c;
  c.name = std::move(name);
  c.kind = kind;
  c.nullable = nullable;
  c.required = required;
  return c;
}

inline Cell I(std::int64_t v) { return Cell{v}; }
inline Cell T(const char* v) { return Cell{std::string(v)}; }
inline Cell D(const char* v) { return Cell{*Decimal::parse(v)}; }
inline Cell TS(const char* v) { return Cell{*Timestamp::parse(v)}; }
inline Cell N() { return Cell::null(); }

// customers(id, name, email, score) / orders(id, customer_id, amount, placed_at).
// Known defects: customers row 2 has a NULL name (incomplete, unexpected
// NULL); customers rows 1 and 3 share id 2 (unique violation); orders row
// 1 has amount -5 (domain); orders row 2 dangles (customer_id 9); orders
// row 2 has a NULL placed_at (temporal gap).
inline Warehouse customers_orders() {
  Warehouse w;

  TableSchema customers;
  customers.name = "customers";
  customers.description = "customer master";
  customers.columns = {col("id", Kind::Integer, false, true),
                       col("name", Kind::Text, false, true),
                       col("email", Kind::Text, true, false),
                       col("score", Kind::Decimal, true, false)};
  customers.columns[1].description = "legal name";
  ValueDomain score_range;
  score_range.min_value = D("0");
  score_range.max_value = D("100");
  customers.columns[3].domain = score_range;
  customers.primary_key = {"id"};

  TableSchema orders;
  orders.name = "orders";
  orders.columns = {col("id", Kind::Integer, false, true),
                    col("customer_id", Kind::Integer, false, true),
                    col("amount", Kind::Decimal, true, false),
                    col("placed_at", Kind::Timestamp, true, false)};
  ValueDomain nonneg;
  nonneg.min_value = D("0");
  orders.columns[2].domain = nonneg;
  orders.columns[3].temporal_role = TemporalRole::TransactionTime;
  orders.primary_key = {"id"};

  w.schemas.emplace("customers", std::move(customers));
  w.schemas.emplace("orders", std::move(orders));

  Dataset cd;
  cd.table = "customers";
  cd.rows = {
      {I(1), T("Ada"), T("ada@example.com"), D("75.5")},
      {I(2), T("Grace"), N(), D("88")},
      {I(2), N(), T("dup@example.com"), N()},
      {I(4), T("Alan"), N(), D("60")},
  };
  Dataset od;
  od.table = "orders";
  od.rows = {
      {I(10), I(1), D("19.99"), TS("2026-01-05T10:00:00Z")},
      {I(11), I(2), D("-5"), TS("2026-01-06T11:30:00Z")},
      {I(12), I(9), D("42"), N()},
  };
  w.datasets.emplace("customers", std::move(cd));
  w.datasets.emplace("orders", std::move(od));

  w.constraints = {
      {"cust_id_nn", "customers", NotNullRule{"id"}},
      {"cust_id_uq", "customers", UniqueRule{{"id"}}},
      {"cust_score_dom", "customers", DomainRule{"score"}},
      {"ord_fk", "orders", ReferentialRule{{"customer_id"}, "customers", {"id"}}},
      {"ord_amount_dom", "orders", DomainRule{"amount"}},
  };
  w.validate();
  return w;
}

}  // namespace dqe::testfix
