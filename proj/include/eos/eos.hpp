#pragma once

#include "eos/artifact.hpp"
#include "eos/chain.hpp"
#include "eos/classes.hpp"
#include "eos/constructor.hpp"
#include "eos/errors.hpp"
#include "eos/odometer.hpp"
#include "eos/order_term.hpp"
#include "eos/ordinal.hpp"
#include "eos/rational.hpp"
#include "eos/rotation.hpp"
#include "eos/schedule.hpp"
#include "eos/system.hpp"
#include "eos/trace.hpp"
#include "eos/verifier.hpp"
