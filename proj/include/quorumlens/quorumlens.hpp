// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "quorumlens/cnf.hpp"
#include "quorumlens/error.hpp"
#include "quorumlens/fork.hpp"
#include "quorumlens/generators.hpp"
#include "quorumlens/influence.hpp"
#include "quorumlens/io/network_json.hpp"
#include "quorumlens/network.hpp"
#include "quorumlens/node_set.hpp"
#include "quorumlens/profile.hpp"
#include "quorumlens/qbtn_safety.hpp"
#include "quorumlens/quorum.hpp"
#include "quorumlens/rational.hpp"
#include "quorumlens/reduction.hpp"
