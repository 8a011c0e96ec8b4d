#pragma once

#include "fuzzdyn/audit.hpp"
#include "fuzzdyn/compact_set.hpp"
#include "fuzzdyn/dynamics.hpp"
#include "fuzzdyn/errors.hpp"
#include "fuzzdyn/fuzzifier.hpp"
#include "fuzzdyn/fuzzy_set.hpp"
#include "fuzzdyn/hausdorff.hpp"
#include "fuzzdyn/metric_space.hpp"
#include "fuzzdyn/random_models.hpp"
#include "fuzzdyn/rational.hpp"
#include "fuzzdyn/report.hpp"
#include "fuzzdyn/rng.hpp"
#include "fuzzdyn/scenario.hpp"
#include "fuzzdyn/sensitivity.hpp"
#include "fuzzdyn/suites.hpp"
#include "fuzzdyn/time_window.hpp"
#include "fuzzdyn/transitivity.hpp"
#include "fuzzdyn/unit_function.hpp"
#include "fuzzdyn/version.hpp"
