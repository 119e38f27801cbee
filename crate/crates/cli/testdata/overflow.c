signed char nondet_schar(void);

int main(void)
{
    signed char a = nondet_schar();
    signed char b = nondet_schar();
    signed char c = a + b;
    return c;
}
