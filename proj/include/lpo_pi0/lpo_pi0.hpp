#pragma once

#include "lpo_pi0/error.hpp"
#include "lpo_pi0/histogram.hpp"
#include "lpo_pi0/io.hpp"
#include "lpo_pi0/json_writer.hpp"
#include "lpo_pi0/lpo_risk.hpp"
#include "lpo_pi0/mtp.hpp"
#include "lpo_pi0/oracle.hpp"
#include "lpo_pi0/pi0_estimator.hpp"
#include "lpo_pi0/rng.hpp"
#include "lpo_pi0/serialize.hpp"
#include "lpo_pi0/simulation.hpp"
