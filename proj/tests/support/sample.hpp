#pragma once

#include "gatelens/relation.hpp"
#include "gatelens/schema.hpp"

namespace gatelens::testing {

inline auto sample_catalog() -> Catalog {
    return parse_catalog(R"({
      "domain_context": "Truck test campaign.",
      "tables": {
        "results": {
          "columns": {
            "name": {"type": "text", "description": "Truck name", "synonyms": ["truck", "trucks"]},
            "test_result": {"type": "text", "description": "OK or NOK", "synonyms": ["outcome"]},
            "release": {"type": "text"},
            "duration": {"type": "float", "nullable": true},
            "test_date": {"type": "date"}
          }
        },
        "trucks": {
          "columns": {
            "truck": {"type": "text"},
            "model": {"type": "text"},
            "axles": {"type": "int"}
          }
        }
      }
    })");
}

inline auto sample_database(const Catalog& catalog) -> Database {
    Database db;
    db.emplace("results", parse_csv("name,test_result,release,duration,test_date\n"
                                    "truck1,OK,R1,10.5,2024-01-10\n"
                                    "truck2,NOK,R1,,2024-01-11\n"
                                    "truck3,NOK,R2,7.0,2024-02-01\n"
                                    "truck1,NOK,R2,3.25,2024-02-03\n",
                                    *catalog.find("results")));
    db.emplace("trucks", parse_csv("truck,model,axles\n"
                                   "truck1,FH,2\n"
                                   "truck2,FM,3\n"
                                   "truck3,FH,3\n",
                                   *catalog.find("trucks")));
    return db;
}

} // namespace gatelens::testing
