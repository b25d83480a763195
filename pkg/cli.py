"""
决策图爆炸实验命令行

    python cli.py eval --op join --f a.fam --g b.fam --out c.fam
    python cli.py gen --kind H --m 4
    python cli.py blowup --op join --mmin 2 --mmax 12 --csv out.csv
    python cli.py orders --op meet --m 3 --exhaustive
    python cli.py bounds --mmax 8
    python cli.py selftest

退出码：0 成功，1 断言失败，2 用法错误。
"""

import functools
import sys
from typing import List, Optional

import click
from rich.console import Console
from rich.table import Table

from config.settings import SYSTEM_CONFIG, get_config
from diagrams.dot_export import export_dot
from diagrams.errors import IdentityMismatchError
from diagrams.family_ops import apply_operation
from diagrams.generators import (
    BaseFamilyKind,
    base_family_manager,
    gen_base_family,
    gen_theorem_instance,
)
from diagrams.kernel import DiagramManager, Family, from_explicit, to_explicit
from diagrams.models import BLOWUP_KINDS, OpKind
from diagrams.text_format import format_family_text, read_family_file
from experiments.blowup import check_growth, run_blowup
from experiments.bounds import verify_bounds
from experiments.order_study import run_order_study, summarize_order_study
from experiments.selftest import run_selftest
from utils.data_utils import frame_to_csv_text, records_to_frame, write_csv
from utils.file_utils import FileUtils
from utils.logger import cli_logger, setup_logging

console = Console()

OP_CHOICES = [kind.value for kind in OpKind]
BLOWUP_CHOICES = [kind.value for kind in BLOWUP_KINDS]
KIND_CHOICES = [kind.value for kind in BaseFamilyKind]
LOG_LEVELS = ["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"]
ORDER_COLUMNS = ["op", "m", "order_id", "z_out", "order"]


def handle_errors(func):
    """断言失败返回 1，输入问题转成用法错误（退出码 2）"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except IdentityMismatchError as e:
            cli_logger.error(f"恒等式检查失败: {e}")
            click.echo(f"断言失败: {e}", err=True)
            return 1
        except (ValueError, FileNotFoundError) as e:
            raise click.UsageError(str(e)) from e

    return wrapper


def _split_names(text: str) -> List[str]:
    return [name.strip() for name in text.split(",") if name.strip()]


def _emit(family: Family, out: Optional[str], dot: Optional[str]):
    text = format_family_text(to_explicit(family))
    if out:
        FileUtils.write_text(out, text)
    else:
        click.echo(text, nl=False)
    if dot:
        FileUtils.write_text(dot, export_dot(family))


@click.group()
@click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False),
              default=SYSTEM_CONFIG["log_level"], show_default=True, help="stderr 日志级别")
@click.option("--log-file", type=click.Path(dir_okay=False), default=None, help="额外写入的日志文件")
def cli(log_level: str, log_file: Optional[str]):
    """集合族代数的 ZDD 爆炸实验"""
    setup_logging(log_level, log_file)


@cli.command("eval")
@click.option("--op", "op", type=click.Choice(OP_CHOICES), required=True, help="运算种类")
@click.option("--f", "f_path", type=click.Path(dir_okay=False), required=True, help="第一个操作数")
@click.option("--g", "g_path", type=click.Path(dir_okay=False), default=None, help="第二个操作数")
@click.option("--y", "y", default="", help="condition 的 Y（逗号分隔）")
@click.option("--y-prime", "y_prime", default="", help="condition 的 Y′（逗号分隔）")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="结果文件，缺省写到 stdout")
@click.option("--dot", type=click.Path(dir_okay=False), default=None, help="结果的 DOT 文件")
@handle_errors
def eval_command(op: str, f_path: str, g_path: Optional[str], y: str, y_prime: str,
                 out: Optional[str], dot: Optional[str]) -> int:
    """读入族文件，执行一个运算，写出结果"""
    kind = OpKind(op)
    if kind.is_binary and g_path is None:
        raise click.UsageError(f"{kind.value} 需要 --g")
    if not kind.is_binary and g_path is not None:
        raise click.UsageError(f"{kind.value} 不接受 --g")
    if kind is not OpKind.CONDITION and (y or y_prime):
        raise click.UsageError(f"--y / --y-prime 只用于 condition，不能用于 {kind.value}")

    f_explicit = read_family_file(f_path)
    g_explicit = read_family_file(g_path) if g_path else None
    universe = list(f_explicit.universe)
    if g_explicit is not None:
        universe += [name for name in g_explicit.universe if name not in universe]
    manager = DiagramManager(universe)

    f = from_explicit(manager, f_explicit)
    g = from_explicit(manager, g_explicit) if g_explicit is not None else None
    extra = None
    if kind is OpKind.CONDITION:
        extra = (_split_names(y), _split_names(y_prime))
    result = apply_operation(kind, f, g, extra)

    explicit = to_explicit(result)
    if extra is not None:
        removed = set(extra[0]) | set(extra[1])
        explicit = explicit.reindexed([name for name in universe if name not in removed])
    text = format_family_text(explicit)
    if out:
        FileUtils.write_text(out, text)
    else:
        click.echo(text, nl=False)
    if dot:
        FileUtils.write_text(dot, export_dot(result))
    cli_logger.info(f"eval {kind.value}: {explicit.cardinality} 个集合")
    return 0


@cli.command("gen")
@click.option("--kind", type=click.Choice(KIND_CHOICES), default=None, help="基础族")
@click.option("--theorem", type=click.Choice(BLOWUP_CHOICES), default=None, help="爆炸实例对应的运算")
@click.option("--m", type=int, required=True)
@click.option("--k", type=int, default=None)
@click.option("--l", "l", type=int, default=None)
@click.option("--over", type=click.Choice(["x", "y"]), default="x", show_default=True,
              help="powerset / singleton_list 的元素")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--dot", type=click.Path(dir_okay=False), default=None)
@click.option("--g-out", type=click.Path(dir_okay=False), default=None, help="实例的 G")
@click.option("--expected-out", type=click.Path(dir_okay=False), default=None, help="实例的已证明输出")
@handle_errors
def gen_command(kind: Optional[str], theorem: Optional[str], m: int, k: Optional[int], l: Optional[int],
                over: str, out: Optional[str], dot: Optional[str], g_out: Optional[str],
                expected_out: Optional[str]) -> int:
    """生成基础族或爆炸实例"""
    if (kind is None) == (theorem is None):
        raise click.UsageError("--kind 与 --theorem 必须二选一")

    if kind is not None:
        manager = base_family_manager(BaseFamilyKind(kind), m, over)
        _emit(gen_base_family(manager, BaseFamilyKind(kind), m, k, l, over), out, dot)
        return 0

    instance = gen_theorem_instance(OpKind(theorem), m)
    _emit(instance.f, out, dot)
    if g_out:
        if instance.g is None:
            raise click.UsageError(f"{theorem} 是单目运算，没有 G")
        FileUtils.write_text(g_out, format_family_text(to_explicit(instance.g)))
    if expected_out:
        if instance.expected is None:
            raise click.UsageError(f"{theorem} m={m} 没有单一的已证明输出")
        FileUtils.write_text(expected_out, format_family_text(to_explicit(instance.expected)))
    return 0


@cli.command("blowup")
@click.option("--op", "op", type=click.Choice(BLOWUP_CHOICES), required=True)
@click.option("--mmin", type=int, required=True)
@click.option("--mmax", type=int, required=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None,
              help="CSV 输出，缺省写到 stdout")
@click.option("--jobs", type=int, default=get_config("experiment")["max_workers"], show_default=True,
              help="并行进程数")
@click.option("--check-growth", "check_growth_flag", is_flag=True, help="对记录做增长判定，不通过时退出码为 1")
@handle_errors
def blowup_command(op: str, mmin: int, mmax: int, csv_path: Optional[str], jobs: int,
                   check_growth_flag: bool) -> int:
    """测量一个运算在 m 区间上的输出大小，并核对已证明的恒等式"""
    records = run_blowup(OpKind(op), mmin, mmax, csv_path=csv_path, jobs=jobs)
    if csv_path is None:
        click.echo(frame_to_csv_text(records_to_frame(record.to_row() for record in records)), nl=False)
    if not check_growth_flag:
        return 0

    verdict = check_growth(records)[OpKind(op)]
    table = Table(title=f"增长判定: {op}")
    table.add_column("m")
    table.add_column("通过")
    table.add_column("最小 log₂ 增量")
    table.add_column("原因")
    table.add_row(f"{verdict.m_values[0]}..{verdict.m_values[-1]}", "✓" if verdict.passed else "✗",
                  "-" if verdict.min_gain is None else f"{verdict.min_gain:.3f}", "; ".join(verdict.reasons))
    Console(stderr=True).print(table)
    return 0 if verdict.passed else 1


@cli.command("orders")
@click.option("--op", "op", type=click.Choice(BLOWUP_CHOICES), required=True)
@click.option("--m", type=int, required=True)
@click.option("--exhaustive", is_flag=True, help="穷举全部顺序（全集 ≤ 8）")
@click.option("--samples", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="逐顺序记录")
@handle_errors
def orders_command(op: str, m: int, exhaustive: bool, samples: int, seed: int,
                   csv_path: Optional[str]) -> int:
    """在其他变量顺序下重建运算输出并汇总大小"""
    mode = "exhaustive" if exhaustive else "sampled"
    records = run_order_study(OpKind(op), m, mode, samples, seed)
    if csv_path:
        rows = [{**record.model_dump(mode="json"), "order": " ".join(record.order)} for record in records]
        write_csv(rows, csv_path, ORDER_COLUMNS)
    summary = summarize_order_study(records, mode)

    table = Table(title=f"顺序研究: {op} m={m} ({mode})")
    for column in ("顺序数", "自然顺序", "最小", "最大", "中位数"):
        table.add_column(column)
    table.add_row(str(summary.orders), str(summary.natural_size), str(summary.min_size),
                  str(summary.max_size), f"{summary.median_size:g}")
    console.print(table)
    console.print(f"最优顺序: {' '.join(summary.best_order)}")
    return 0


@cli.command("bounds")
@click.option("--mmax", type=int, required=True)
@click.option("--samples", type=int, default=None, help="每个族的抽样顺序数")
@click.option("--seed", type=int, default=None)
@click.option("--progress", is_flag=True, help="显示进度条")
@handle_errors
def bounds_command(mmax: int, samples: Optional[int], seed: Optional[int], progress: bool) -> int:
    """检查 E / Q / C / T 族的多项式大小上界"""
    report = verify_bounds(mmax, samples, seed, progress=progress)
    console.print(f"检查 {report.checked} 个 (族, 顺序) 组合，违反 {len(report.violations)} 处")
    if report.violations:
        table = Table(title="违反上界")
        for column in ("族", "m", "k", "顺序", "大小", "上界"):
            table.add_column(column)
        for violation in report.violations:
            table.add_row(violation.family, str(violation.m), str(violation.k),
                          "自然" if violation.order_id is None else str(violation.order_id),
                          str(violation.size), str(violation.bound))
        console.print(table)
        return 1
    return 0


@cli.command("selftest")
@click.option("--instances", type=int, default=None, help="每种运算的随机实例数")
@click.option("--canonicity", type=int, default=None, help="规范性检查的随机族数")
@click.option("--conditioning", type=int, default=None, help="条件化检查的随机族数")
@click.option("--seed", type=int, default=None)
@click.option("--progress", is_flag=True, help="显示进度条")
@handle_errors
def selftest_command(instances: Optional[int], canonicity: Optional[int], conditioning: Optional[int],
                     seed: Optional[int], progress: bool) -> int:
    """参照实现等价、规范性、语义大小比与条件化检查"""
    report = run_selftest(instances, canonicity, conditioning, seed, progress=progress)
    table = Table(title=f"自检 (seed={report.seed})")
    for column in ("检查", "结果", "实例数", "耗时(s)", "说明"):
        table.add_column(column)
    for check in report.checks:
        table.add_row(check.name, "✓" if check.passed else "✗", str(check.instances),
                      f"{check.elapsed_s:.2f}", "\n".join(check.details))
    console.print(table)
    return 0 if report.passed else 1


def cli_main(args: Optional[List[str]] = None) -> int:
    """运行命令行并返回退出码"""
    try:
        result = cli.main(args=args, prog_name="ddlab", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo("已中止", err=True)
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(cli_main())
