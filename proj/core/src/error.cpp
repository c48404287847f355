#include "nilm/error.hpp"

namespace nilm {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::malformed_row: return "MalformedRow";
    case Errc::gap_too_large: return "GapTooLarge";
    case Errc::non_monotone_time: return "NonMonotoneTime";
    case Errc::io_error: return "IoError";
    case Errc::empty_trace: return "EmptyTrace";
    case Errc::window_too_large: return "WindowTooLarge";
    case Errc::even_window: return "EvenWindow";
    case Errc::invalid_sigma: return "InvalidSigma";
    case Errc::invalid_lambda: return "InvalidLambda";
    case Errc::trace_too_short: return "TraceTooShort";
    case Errc::empty_stat: return "EmptyStat";
    case Errc::already_on: return "AlreadyOn";
    case Errc::already_off: return "AlreadyOff";
    case Errc::instance_too_large: return "InstanceTooLarge";
    case Errc::overlapping_cells: return "OverlappingCells";
    case Errc::unknown_region: return "UnknownRegion";
    case Errc::malformed_cell: return "MalformedCell";
    case Errc::zero_truth_energy: return "ZeroTruthEnergy";
    case Errc::invalid_scenario: return "InvalidScenario";
    case Errc::invalid_config: return "InvalidConfig";
  }
  return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void raise(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace nilm
