from chainc.cli import main

main()
