#ifndef TSS_TEST_FIXTURES_HPP
#define TSS_TEST_FIXTURES_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "tss/cwexpr.hpp"
#include "tss/tss_format.hpp"

namespace tss::testing {

inline std::string data_path(const std::string& name) { return std::string(TSS_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Instance golden_instance() { return parse_tss(slurp(data_path("golden.tss"))); }
inline CwExpr golden_expr() { return parse_expr(slurp(data_path("golden.cwe"))); }

/// 1-based external id to internal vertex.
inline Vertex v(long long id) { return from_external(id); }

}  // namespace tss::testing

#endif
