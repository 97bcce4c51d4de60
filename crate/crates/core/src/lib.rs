pub mod cli;
pub mod harmonics;
pub mod inversion;
pub mod io;
pub mod phantoms;
pub mod specfun;
pub mod wavesim;
