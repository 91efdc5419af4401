import json
from datetime import datetime
from typing import Dict, List, Any, Optional
import logging
from pathlib import Path

import pandas as pd


class ReportGenerator:
    def __init__(self, reports_dir: str = "./reports"):
        self.reports_dir = Path(reports_dir)
        self.logger = logging.getLogger(__name__)

    def emit_report(self, suite: str, params: Dict[str, Any], checked: int,
                    failures: Optional[List[Dict[str, Any]]] = None, seed: Optional[int] = None,
                    elapsed_ms: int = 0) -> Dict[str, Any]:
        return {
            'suite': suite,
            'params': params,
            'checked': checked,
            'failures': list(failures or []),
            'seed': seed,
            'elapsed_ms': elapsed_ms,
        }

    def aggregate(self, reports: List[Dict[str, Any]], seed: Optional[int] = None) -> Dict[str, Any]:
        ordered = sorted(reports, key=lambda r: r['suite'])
        return {
            'suite': 'all',
            'checked': sum(r['checked'] for r in ordered),
            'failures': [dict(f, suite=r['suite']) for r in ordered for f in r['failures']],
            'suites': ordered,
            'seed': seed,
            'elapsed_ms': sum(r.get('elapsed_ms', 0) for r in ordered),
        }

    @staticmethod
    def passed(report: Dict[str, Any]) -> bool:
        return not report['failures']

    @staticmethod
    def to_json(report: Dict[str, Any]) -> str:
        return json.dumps(report, indent=2, sort_keys=True, default=str)

    def summary_frame(self, report: Dict[str, Any]) -> pd.DataFrame:
        reports = report.get('suites', [report])
        rows = [{'suite': r['suite'], 'checked': r['checked'], 'failures': len(r['failures']),
                 'passed': not r['failures'], 'elapsed_ms': r.get('elapsed_ms', 0)} for r in reports]
        return pd.DataFrame(rows, columns=['suite', 'checked', 'failures', 'passed', 'elapsed_ms'])

    def save_report(self, report: Dict[str, Any], format_type: str = 'json') -> str:
        self.reports_dir.mkdir(parents=True, exist_ok=True)
        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        stem = f"verification_{report['suite']}_{timestamp}"

        if format_type == 'json':
            filepath = self.reports_dir / f"{stem}.json"
            with open(filepath, 'w', encoding='utf-8') as f:
                f.write(self.to_json(report))

        elif format_type == 'csv':
            filepath = self.reports_dir / f"{stem}.csv"
            self.summary_frame(report).to_csv(filepath, index=False)

        elif format_type == 'html':
            filepath = self.reports_dir / f"{stem}.html"
            self.save_html_dashboard(report, filepath)

        else:
            raise ValueError(f"unknown report format {format_type!r}")

        self.logger.info(f"Report saved: {filepath}")
        return str(filepath)

    def save_html_dashboard(self, report: Dict[str, Any], filepath: Path):
        html_template = """<!DOCTYPE html>
<html>
<head>
    <title>Verification Report</title>
    <style>
        body {{ font-family: Arial, sans-serif; margin: 20px; }}
        .header {{ background: #2c3e50; color: white; padding: 20px; border-radius: 8px; }}
        .pass {{ background: #27ae60; color: white; }}
        .fail {{ background: #e74c3c; color: white; }}
        table {{ border-collapse: collapse; margin: 20px 0; }}
        td, th {{ border: 1px solid #ddd; padding: 8px; }}
    </style>
</head>
<body>
    <div class="header">
        <h1>Verification Report: {suite}</h1>
        <p>Generated: {generated_at}</p>
        <p>Seed: {seed} | Checked: {checked} | Failures: {failure_count}</p>
    </div>
    {table}
</body>
</html>"""

        frame = self.summary_frame(report)
        rows = ""
        for row in frame.itertuples(index=False):
            status = 'pass' if row.passed else 'fail'
            rows += (f"<tr class=\"{status}\"><td>{row.suite}</td><td>{row.checked}</td>"
                     f"<td>{row.failures}</td><td>{row.elapsed_ms}</td></tr>")
        table = ("<table><tr><th>Suite</th><th>Checked</th><th>Failures</th><th>Elapsed (ms)</th></tr>"
                 f"{rows}</table>")

        html_content = html_template.format(
            suite=report['suite'],
            generated_at=datetime.now().isoformat(),
            seed=report.get('seed'),
            checked=report['checked'],
            failure_count=len(report['failures']),
            table=table,
        )

        with open(filepath, 'w', encoding='utf-8') as f:
            f.write(html_content)
