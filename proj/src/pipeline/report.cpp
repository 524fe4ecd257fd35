#include <sstream>

#include "apvar/pipeline.hpp"

namespace apvar {

nlohmann::json BoundReport::to_json() const {
  return {{"schema_version", kReportSchemaVersion},
          {"sequence", sequence},
          {"config", config.to_json()},
          {"prop13", prop13.to_json()},
          {"cauchy_schwarz", cs.to_json()},
          {"target", target},
          {"final_bound", final_bound},
          {"ratio", ratio},
          {"fitted_constant", fitted_constant},
          {"degenerate_range", degenerate_range},
          {"chain_sound", chain_sound},
          {"details", details}};
}

std::string BoundReport::csv_header() const {
  return "schema_version,theorem,ending,sequence,N,Q,K,Q0,R,lhs_variance_sum,minor_integral,minor_error,"
         "ramanujan_tail,final_bound,target,ratio,fitted_constant,chain_sound";
}

std::string BoundReport::csv_row() const {
  std::ostringstream os;
  const bool t2 = config.theorem == TheoremKind::kTheorem2;
  os << kReportSchemaVersion << ',' << to_string(config.theorem) << ',' << (t2 ? to_string(config.ending) : "")
     << ',' << sequence;
  for (double v : {config.N, config.Q, config.K, config.Q0, config.R, prop13.lhs_variance_sum, prop13.minor_integral,
                   prop13.minor_error, prop13.ramanujan_tail, final_bound, target, ratio, fitted_constant}) {
    os << ',' << format_double(v);
  }
  os << ',' << (chain_sound ? "true" : "false");
  return os.str();
}

}  // namespace apvar
