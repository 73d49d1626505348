use exact_kernel::par::{self, Exec};

use crate::report::{CheckReport, Status};

/// A unit of work producing one or more reports.
pub type Job<'a> = Box<dyn Fn() -> Vec<CheckReport> + Send + Sync + 'a>;

/// Run every job, in parallel when allowed, and merge the reports in a
/// deterministic order: by check name, ties in job order.
pub fn run_jobs(jobs: &[Job], exec: Exec) -> Vec<CheckReport> {
    let mut out: Vec<CheckReport> = par::map(exec, jobs, |job| job()).into_iter().flatten().collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

/// Fail if anything failed; otherwise uncertifiable if anything was;
/// otherwise pass.
pub fn overall_status(reports: &[CheckReport]) -> Status {
    if reports.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else if reports.iter().any(|r| r.status == Status::Uncertifiable) {
        Status::Uncertifiable
    } else {
        Status::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(name: &str, status: Status) -> CheckReport {
        let mut r = CheckReport::new(name);
        r.status = status;
        r
    }

    #[test]
    fn ordering_is_independent_of_execution() {
        let jobs: Vec<Job> = (0..8)
            .map(|i| -> Job { Box::new(move || vec![named(&format!("c{}", (i * 5) % 8), Status::Pass), named("a", Status::Pass)]) })
            .collect();
        let par = run_jobs(&jobs, Exec::Parallel);
        let seq = run_jobs(&jobs, Exec::Sequential);
        assert_eq!(par, seq);
        assert_eq!(par[0].name, "a");
        assert!(par.windows(2).all(|w| w[0].name <= w[1].name));
    }

    #[test]
    fn overall() {
        assert_eq!(overall_status(&[]), Status::Pass);
        assert_eq!(overall_status(&[named("x", Status::Uncertifiable), named("y", Status::Pass)]), Status::Uncertifiable);
        assert_eq!(overall_status(&[named("x", Status::Uncertifiable), named("y", Status::Fail)]), Status::Fail);
    }
}
