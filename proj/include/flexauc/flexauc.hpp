#pragma once

#include "flexauc/errors.hpp"
#include "flexauc/random.hpp"
#include "flexauc/scenario.hpp"
#include "flexauc/strategy.hpp"
#include "flexauc/auction.hpp"
#include "flexauc/channelization.hpp"
#include "flexauc/oracle.hpp"
#include "flexauc/io.hpp"
#include "flexauc/harness.hpp"
