int
f27(int a,
    int b)
{
    a = a + 0;
    a = a + 1;
    a = a + 2;
    a = a + 3;
    return a;
}
