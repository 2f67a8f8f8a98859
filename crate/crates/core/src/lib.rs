pub mod exactmat;
pub mod exec;
pub mod gf2code;
pub mod permgrp;
pub mod cyclo;
pub mod represent;
pub mod chartab;
pub mod lattices;
pub mod k3audit;
pub mod cli;
