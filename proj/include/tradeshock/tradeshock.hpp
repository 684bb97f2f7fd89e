#pragma once

#include "tradeshock/config.hpp"
#include "tradeshock/csv.hpp"
#include "tradeshock/error.hpp"
#include "tradeshock/estimator.hpp"
#include "tradeshock/field.hpp"
#include "tradeshock/geo.hpp"
#include "tradeshock/ingest.hpp"
#include "tradeshock/io.hpp"
#include "tradeshock/linalg.hpp"
#include "tradeshock/pipeline.hpp"
#include "tradeshock/sensitivity.hpp"
#include "tradeshock/sha256.hpp"
#include "tradeshock/shock.hpp"
#include "tradeshock/stats.hpp"
