#pragma once

#include "keydisc/class_table.hpp"
#include "keydisc/datagen.hpp"
#include "keydisc/disk_store.hpp"
#include "keydisc/ntriples.hpp"
#include "keydisc/oracle.hpp"
#include "keydisc/rational.hpp"
#include "keydisc/refinement.hpp"
#include "keydisc/report.hpp"
#include "keydisc/scoring.hpp"
#include "keydisc/search.hpp"
#include "keydisc/selection.hpp"
#include "keydisc/signature.hpp"
#include "keydisc/table_builder.hpp"
