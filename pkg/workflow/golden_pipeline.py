#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# Golden corpus 自动化流程脚本
# 对 samples/*.sfc 逐个执行：parse -> validate -> convert json/xml -> convert dsl -> dot -> count
#
# 用法：
#   python workflow/golden_pipeline.py                      # 处理全部样例
#   python workflow/golden_pipeline.py --only mobile
#   python workflow/golden_pipeline.py --out-dir build/golden
#

import argparse
import subprocess
import sys
from pathlib import Path
from typing import List, Optional

PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from chainc.console import print_error, print_info, print_step, print_success, print_warning  # noqa: E402

# 这些样例引用 catalog 条目，需要 --store
CATALOG_SAMPLES = ("catalog-user",)


class GoldenPipeline:
    """Golden corpus 流程"""

    def __init__(self, samples_dir: Optional[Path] = None, out_dir: Optional[Path] = None):
        """初始化路径"""
        self.project_root = PROJECT_ROOT
        self.samples_dir = samples_dir or self.project_root / "samples"
        self.out_dir = out_dir or self.project_root / "build" / "golden"

    def chainc(self, *args: str, stdin: Optional[str] = None) -> subprocess.CompletedProcess:
        """Run `python -m chainc` from the project root and capture its output"""
        return subprocess.run(
            [sys.executable, "-m", "chainc", "-q", *args],
            cwd=str(self.project_root),
            input=stdin,
            capture_output=True,
            text=True,
            encoding="utf-8",
            check=False,
        )

    def run_step(self, description: str, *args: str, stdin: Optional[str] = None) -> Optional[str]:
        """
        Run one chainc command

        Args:
            description: Step label
            *args: chainc arguments
            stdin: Text fed on standard input

        Returns:
            Standard output on success, None otherwise
        """
        result = self.chainc(*args, stdin=stdin)
        if result.returncode != 0:
            print_error(f"{description} 失败 (exit {result.returncode})")
            if result.stderr.strip():
                print(result.stderr.rstrip(), file=sys.stderr)
            return None
        return result.stdout

    def get_samples(self, only: Optional[str] = None) -> List[Path]:
        """获取样例列表（跳过需要 catalog 的样例）"""
        samples = sorted(self.samples_dir.glob("*.sfc"))
        if only:
            samples = [p for p in samples if p.stem == only]
        return [p for p in samples if p.stem not in CATALOG_SAMPLES]

    def process_sample(self, sample: Path) -> bool:
        """处理单个样例"""
        print_step(f"样例: {sample.name}")
        path = str(sample)

        canonical = self.run_step("parse", "parse", path)
        if canonical is None:
            return False
        print_info(canonical.rstrip())

        if self.run_step("validate", "validate", path) is None:
            return False

        for fmt in ("json", "xml"):
            document = self.run_step(f"convert --to {fmt}", "convert", path, "--to", fmt)
            if document is None:
                return False
            (self.out_dir / f"{sample.stem}.{fmt}").write_text(document, encoding="utf-8")
            back = self.run_step(f"convert {fmt} -> dsl", "convert", "-", "--format", fmt, "--to", "dsl",
                                 stdin=document)
            if back is None:
                return False
            # 转回的 dsl 可能重命名组件，比较的是再次生成的实例文档
            again = self.run_step(f"convert dsl -> {fmt}", "convert", "-", "--format", "dsl", "--to", fmt,
                                  stdin=back)
            if again is None:
                return False
            if again != document:
                print_error(f"{fmt} round trip changed the document: {back.rstrip()!r}")
                return False

        dot_path = self.out_dir / f"{sample.stem}.dot"
        if self.run_step("dot", "dot", path, "-o", str(dot_path)) is None:
            return False

        count = self.run_step("count", "expand", path, "--mode", "enumerate", "--count-only")
        if count is None:
            return False
        print_info(f"候选图数量: {count.strip()}")
        print_success(f"{sample.name} 通过")
        return True

    def run(self, only: Optional[str] = None) -> int:
        """运行主流程"""
        print_info("Golden corpus 自动化流程")
        print_info(f"项目根目录: {self.project_root}")

        samples = self.get_samples(only)
        if not samples:
            print_error(f"未找到样例: {self.samples_dir}")
            return 1
        self.out_dir.mkdir(parents=True, exist_ok=True)

        success_count = 0
        fail_count = 0
        for sample in samples:
            if self.process_sample(sample):
                success_count += 1
            else:
                print_warning(f"样例 {sample.name} 失败")
                fail_count += 1

        # 总结
        print_step("处理完成")
        print_info(f"成功: {success_count} 个")
        print_info(f"失败: {fail_count} 个")
        print_info(f"输出目录: {self.out_dir}")
        return 0 if fail_count == 0 else 1


def main():
    """主函数"""
    parser = argparse.ArgumentParser(
        description='Golden corpus 自动化流程：parse -> validate -> convert -> dot -> count',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例：
  python workflow/golden_pipeline.py
  python workflow/golden_pipeline.py --only mobile
  python workflow/golden_pipeline.py --out-dir build/golden
        """
    )
    parser.add_argument('--samples-dir', type=Path, default=None, help='样例目录（默认: samples/）')
    parser.add_argument('--out-dir', type=Path, default=None, help='输出目录（默认: build/golden/）')
    parser.add_argument('--only', type=str, default=None, help='只处理指定样例（文件名，不含扩展名）')
    args = parser.parse_args()

    pipeline = GoldenPipeline(args.samples_dir, args.out_dir)
    sys.exit(pipeline.run(only=args.only))


if __name__ == "__main__":
    main()
